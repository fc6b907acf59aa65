"""Exact rational linear algebra and truncated series in a formal parameter.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere in the package.  Matrices are stored sparsely as
``{(row, col): Fraction}`` with zero entries never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

Scalar = Fraction

__all__ = [
    "Scalar",
    "SparseMatrix",
    "Echelon",
    "kernel_basis",
    "solve_linear",
    "rank",
    "HPoly",
    "add_term",
    "add_scaled",
]


def add_term(d: dict, key, c) -> None:
    """Accumulate ``c`` at ``key`` in a sparse vector, dropping exact zeros."""
    if not c:
        return
    v = d.get(key)
    if v is None:
        d[key] = c
    else:
        v = v + c
        if v:
            d[key] = v
        else:
            del d[key]


def add_scaled(d: dict, other: Mapping, c=1) -> None:
    if not c:
        return
    for k, v in other.items():
        add_term(d, k, c * v)


class SparseMatrix:
    """A rows x cols matrix with exact entries, only nonzeros stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry {(i, j)} outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                self.entries[(i, j)] = v

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, object]]) -> "SparseMatrix":
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                entries[(i, j)] = v
        return cls(nrows, len(columns), entries)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        rows: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def apply(self, x: Sequence) -> list[Fraction]:
        if len(x) != self.cols:
            raise ValueError(f"vector of length {len(x)} does not match {self.cols} columns")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if x[j]:
                out[i] += v * x[j]
        return out

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


@dataclass
class Echelon:
    """Reduced row echelon form of a matrix, with the row operations recorded
    so that any number of right-hand sides can be reduced afterwards.

    Pivoting is deterministic: columns are scanned left to right and the
    pivot row is the smallest-index unused row with a nonzero entry.
    """

    rows: int
    cols: int
    pivots: list[tuple[int, int]] = field(default_factory=list)  # (row, col)
    reduced: dict[int, dict[int, Fraction]] = field(default_factory=dict)
    ops: list[tuple] = field(default_factory=list)

    @classmethod
    def of(cls, m: SparseMatrix) -> "Echelon":
        rows = m.row_dicts()
        colmap: dict[int, set[int]] = {}
        for (i, j) in m.entries:
            colmap.setdefault(j, set()).add(i)
        used: set[int] = set()
        ech = cls(m.rows, m.cols)
        for col in range(m.cols):
            cands = [i for i in colmap.get(col, ()) if i not in used]
            if not cands:
                continue
            p = min(cands)
            used.add(p)
            prow = rows[p]
            inv = 1 / prow[col]
            if inv != 1:
                for j in prow:
                    prow[j] *= inv
                ech.ops.append(("scale", p, inv))
            for i in sorted(colmap[col]):
                if i == p:
                    continue
                row = rows[i]
                c = row.get(col)
                if not c:
                    continue
                for j, v in prow.items():
                    nv = row.get(j, 0) - c * v
                    if nv:
                        if j not in row:
                            colmap.setdefault(j, set()).add(i)
                        row[j] = nv
                    else:
                        row.pop(j, None)
                        colmap[j].discard(i)
                ech.ops.append(("sub", i, p, c))
            colmap[col] = {p}
            ech.pivots.append((p, col))
        ech.reduced = {p: dict(rows[p]) for p, _ in ech.pivots}
        return ech

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, b: Sequence) -> list[Fraction]:
        if len(b) != self.rows:
            raise ValueError(f"right-hand side of length {len(b)} does not match {self.rows} rows")
        b = [Fraction(v) for v in b]
        for op in self.ops:
            if op[0] == "scale":
                _, p, inv = op
                b[p] *= inv
            else:
                _, i, p, c = op
                if b[p]:
                    b[i] -= c * b[p]
        return b

    def solve(self, b: Sequence) -> list[Fraction] | None:
        rb = self.reduce(b)
        pivot_rows = {p for p, _ in self.pivots}
        for i, v in enumerate(rb):
            if v and i not in pivot_rows:
                return None
        x = [Fraction(0)] * self.cols
        for p, col in self.pivots:
            x[col] = rb[p]
        return x

    def solve_sparse(self, b: Mapping[int, object]) -> dict[int, Fraction] | None:
        """Sparse variant of :meth:`solve`; ``b`` maps row index to value."""
        dense = [Fraction(0)] * self.rows
        for i, v in b.items():
            dense[i] = Fraction(v)
        x = self.solve(dense)
        if x is None:
            return None
        return {j: v for j, v in enumerate(x) if v}

    def kernel(self) -> list[list[Fraction]]:
        pivot_cols = {col: p for p, col in self.pivots}
        basis = []
        for free in range(self.cols):
            if free in pivot_cols:
                continue
            v = [Fraction(0)] * self.cols
            v[free] = Fraction(1)
            for p, col in self.pivots:
                c = self.reduced[p].get(free)
                if c:
                    v[col] = -c
            basis.append(v)
        return basis


def kernel_basis(m: SparseMatrix) -> list[list[Fraction]]:
    """Exact basis of the null space, one vector per non-pivot column."""
    return Echelon.of(m).kernel()


def solve_linear(m: SparseMatrix, b: Sequence) -> list[Fraction] | None:
    """Some ``x`` with ``m @ x == b``, or ``None`` when the system is inconsistent.

    Free variables are set to zero, so the answer is reproducible.
    """
    if len(b) != m.rows:
        raise ValueError(f"right-hand side of length {len(b)} does not match {m.rows} rows")
    return Echelon.of(m).solve(b)


def rank(m: SparseMatrix) -> int:
    return Echelon.of(m).rank


class HPoly:
    """Truncated power series ``sum_{m<=cap} hbar^m * coeffs[m]``.

    Coefficients are arbitrary module elements supporting ``+``, unary ``-``
    and scalar ``*``; ``mul`` supplies the product of two coefficients when the
    series are multiplied.  Mixing caps truncates at the smaller one.
    """

    __slots__ = ("coeffs", "cap", "zero")

    def __init__(self, coeffs: Iterable, cap: int, zero):
        if cap < 0:
            raise ValueError("order cap must be non-negative")
        coeffs = list(coeffs)[: cap + 1]
        coeffs += [zero] * (cap + 1 - len(coeffs))
        self.coeffs = coeffs
        self.cap = cap
        self.zero = zero

    def __getitem__(self, m: int):
        return self.coeffs[m]

    def __add__(self, other: "HPoly") -> "HPoly":
        cap = min(self.cap, other.cap)
        return HPoly([self.coeffs[m] + other.coeffs[m] for m in range(cap + 1)], cap, self.zero)

    def __neg__(self) -> "HPoly":
        return HPoly([-c for c in self.coeffs], self.cap, self.zero)

    def __sub__(self, other: "HPoly") -> "HPoly":
        return self + (-other)

    def scale(self, c) -> "HPoly":
        return HPoly([c * x for x in self.coeffs], self.cap, self.zero)

    def map(self, fn: Callable, zero=None) -> "HPoly":
        return HPoly([fn(c) for c in self.coeffs], self.cap, self.zero if zero is None else zero)

    def mul(self, other: "HPoly", mul: Callable, zero=None) -> "HPoly":
        cap = min(self.cap, other.cap)
        zero = self.zero if zero is None else zero
        out = [zero] * (cap + 1)
        for i in range(cap + 1):
            for j in range(cap + 1 - i):
                out[i + j] = out[i + j] + mul(self.coeffs[i], other.coeffs[j])
        return HPoly(out, cap, zero)

    def __repr__(self):
        return f"HPoly(cap={self.cap}, {self.coeffs!r})"
