"""Graded-symmetric multilinear maps on ``E(g)`` and the Chevalley-Eilenberg differential.

Signs live in the shifted grading: a wedge monomial of arity ``a`` is odd iff
``a`` is odd, and ``Q2(x, y) = (-1)^arity(x) [x, y]`` is graded symmetric of
degree one.  A cochain of degree ``d`` taking ``n`` arguments sends a tuple of
arities ``a_i`` to wedge arity ``sum(a_i) - 2(n-1) + d``.  Values are stored
on canonical (sorted) argument tuples; a tuple with a repeated odd argument is
never stored, since graded symmetry forces it to vanish.

For the free kind every argument tuple is restricted to total weight at most
the cap; all operations preserve weight, so this is an honest quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .envelope import AlgebraError
from .exterior import LieBasis, bracket_keys, poly_weight
from .linalg import Echelon, SparseMatrix, add_scaled, add_term

__all__ = [
    "Cochain",
    "canonical_args",
    "unshuffle_sign",
    "e_basis",
    "arg_tuples",
    "q2_poly",
    "ce_differential",
    "is_coboundary",
    "output_arity",
]


def _order(key: tuple) -> tuple:
    return (len(key), key)


def canonical_args(args: Sequence[tuple]) -> tuple[int, tuple] | None:
    """Sort wedge-monomial arguments with the Koszul sign; ``None`` on a repeated odd one."""
    items = list(args)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and _order(items[j - 1]) > _order(items[j]):
            if len(items[j - 1]) % 2 and len(items[j]) % 2:
                sign = -sign
            items[j - 1], items[j] = items[j], items[j - 1]
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b and len(a) % 2:
            return None
    return sign, tuple(items)


def unshuffle_sign(args: Sequence[tuple], picked: Sequence[int]) -> int:
    """Koszul sign of moving ``args[picked]`` (in order) in front of the rest."""
    chosen = set(picked)
    sign = 1
    for i in picked:
        if len(args[i]) % 2:
            for j in range(i):
                if j not in chosen and len(args[j]) % 2:
                    sign = -sign
    return sign


def output_arity(args: Sequence[tuple], degree: int) -> int:
    return sum(len(a) for a in args) - 2 * (len(args) - 1) + degree


def q2_poly(basis: LieBasis, x: tuple, y: tuple) -> dict[tuple, Fraction]:
    """The shifted bracket ``(-1)^arity(x) [x, y]`` on wedge monomials."""
    br = bracket_keys(basis, x, y)
    if len(x) % 2:
        return {k: -c for k, c in br.items()}
    return br


def e_basis(basis: LieBasis, cap: int | None) -> list[tuple]:
    """Wedge monomials of positive arity, with total weight at most ``cap`` when given."""
    n = len(basis)
    w = basis.weights
    out: list[tuple] = []

    def rec(start: int, acc: list, weight: int):
        for i in range(start, n):
            nw = weight + w[i]
            if cap is not None and nw > cap:
                continue
            acc.append(i)
            out.append(tuple(acc))
            rec(i + 1, acc, nw)
            acc.pop()

    rec(0, [], 0)
    out.sort(key=_order)
    return out


def arg_tuples(basis: LieBasis, nargs: int, cap: int | None, weight: int | None = None) -> list[tuple]:
    """Canonical ``nargs``-tuples of wedge monomials (no repeated odd entry) within the cap."""
    elems = e_basis(basis, cap)
    out = []
    for combo in itertools.combinations_with_replacement(elems, nargs):
        if any(a == b and len(a) % 2 for a, b in zip(combo, combo[1:])):
            continue
        if cap is not None or weight is not None:
            tw = sum(poly_weight(basis, k) for k in combo)
            if cap is not None and tw > cap:
                continue
            if weight is not None and tw != weight:
                continue
        out.append(combo)
    return out


@dataclass
class Cochain:
    """Graded-symmetric ``nargs``-linear map on ``E(g)``, stored on canonical tuples.

    ``values`` maps a canonical tuple of wedge monomials to a raw dict of
    output keys; output keys are wedge monomials for an ``E(g)``-valued
    cochain and tensor keys for a ``D``-valued one.
    """

    basis: LieBasis
    nargs: int
    degree: int
    values: dict[tuple, dict] = field(default_factory=dict)
    cap: int | None = None

    def value(self, args: Sequence[tuple]) -> dict:
        can = canonical_args(args)
        if can is None:
            return {}
        s, key = can
        v = self.values.get(key)
        if not v:
            return {}
        return v if s == 1 else {k: -c for k, c in v.items()}

    def evaluate(self, args: Sequence[Mapping]) -> dict:
        """Multilinear extension to arbitrary polyvector arguments (raw dicts)."""
        out: dict = {}
        for combo in itertools.product(*(a.items() for a in args)):
            c = 1
            for _, x in combo:
                c *= x
            add_scaled(out, self.value([k for k, _ in combo]), c)
        return out

    def __bool__(self):
        return any(self.values.values())

    def is_zero(self) -> bool:
        return not self


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg differential


def _bracket_tagged(basis: LieBasis, val: Mapping, x: tuple) -> dict:
    """``Q2(val, x)`` where ``val`` maps ``(wedge key, tag)`` to coefficients."""
    out: dict = {}
    for (k, tag), c in val.items():
        for k2, c2 in q2_poly(basis, k, x).items():
            add_term(out, (k2, tag), c * c2)
    return out


def _ce_at(basis: LieBasis, lookup: Callable[[tuple], dict], degree: int, args: tuple) -> dict:
    """``[Q2, phi]`` at one canonical argument tuple, on tagged values.

    ``(d phi)(x) = sum_{Sh(m,1)} e Q2(phi(x_I), x_j) - (-1)^|phi| sum_{Sh(2,m-1)} e phi(Q2(x_i, x_j), x_rest)``
    """
    n = len(args)
    out: dict = {}
    for j in range(n):
        rest = args[:j] + args[j + 1 :]
        eps = unshuffle_sign(args, [i for i in range(n) if i != j])
        val = lookup(rest)
        if val:
            add_scaled(out, _bracket_tagged(basis, val, args[j]), eps)
    outer = 1 if degree % 2 else -1
    for i, j in itertools.combinations(range(n), 2):
        q = q2_poly(basis, args[i], args[j])
        if not q:
            continue
        eps = unshuffle_sign(args, [i, j]) * outer
        rest = tuple(args[k] for k in range(n) if k not in (i, j))
        for qk, qc in q.items():
            can = canonical_args((qk,) + rest)
            if can is None:
                continue
            add_scaled(out, lookup(can[1]), eps * qc * can[0])
    return out


def _concrete_lookup(phi: Cochain) -> Callable[[tuple], dict]:
    cache: dict = {}

    def lookup(t: tuple) -> dict:
        hit = cache.get(t)
        if hit is None:
            hit = {(k, None): c for k, c in phi.values.get(t, {}).items()}
            cache[t] = hit
        return hit

    return lookup


def ce_differential(phi: Cochain, domain: Iterable[tuple] | None = None) -> Cochain:
    """``[Q2, phi]``, evaluated on ``domain`` (default: every canonical tuple within the cap)."""
    basis = phi.basis
    if domain is None:
        domain = arg_tuples(basis, phi.nargs + 1, phi.cap)
    lookup = _concrete_lookup(phi)
    values = {}
    for t in domain:
        v = _ce_at(basis, lookup, phi.degree, t)
        clean = {k: c for (k, _), c in v.items()}
        if clean:
            values[t] = clean
    return Cochain(basis, phi.nargs + 1, phi.degree + 1, values, phi.cap)


def _outputs(basis: LieBasis, elems: list[tuple], args: tuple, degree: int) -> list[tuple]:
    arity = output_arity(args, degree)
    if arity < 1:
        return []
    if basis.algebra.is_free:
        w = sum(poly_weight(basis, k) for k in args)
        return [k for k in elems if len(k) == arity and poly_weight(basis, k) == w]
    return [k for k in elems if len(k) == arity]


def is_coboundary(phi: Cochain) -> Cochain | None:
    """Some ``psi`` with ``ce_differential(psi) = phi``, or ``None`` when none exists.

    Raises if ``phi`` is not closed.  The unknowns are the values of ``psi``
    on every canonical tuple within the cap; free variables are set to zero.
    """
    basis = phi.basis
    if phi.nargs < 2:
        raise AlgebraError("a coboundary needs at least two arguments")
    if ce_differential(phi):
        raise AlgebraError("cochain is not closed, so it cannot be a coboundary")
    cap = phi.cap
    deg = phi.degree - 1
    psi_values: dict[tuple, dict] = {}
    if not phi:
        return Cochain(basis, phi.nargs - 1, deg, psi_values, cap)
    elems = e_basis(basis, cap)
    targets = arg_tuples(basis, phi.nargs, cap)
    sources = arg_tuples(basis, phi.nargs - 1, cap)
    unknowns = [(s, o) for s in sources for o in _outputs(basis, elems, s, deg)]
    col_of = {u: j for j, u in enumerate(unknowns)}
    by_src: dict[tuple, dict] = {}
    for s, o in unknowns:
        by_src.setdefault(s, {})[(o, (s, o))] = 1

    def lookup(t: tuple) -> dict:
        return by_src.get(t, {})

    row_of: dict[tuple, int] = {}
    entries: dict[tuple[int, int], Fraction] = {}
    for t in targets:
        for (k, tag), c in _ce_at(basis, lookup, deg, t).items():
            r = row_of.setdefault((t, k), len(row_of))
            entries[(r, col_of[tag])] = entries.get((r, col_of[tag]), 0) + c
    b: dict[int, Fraction] = {}
    for t, v in phi.values.items():
        for k, c in v.items():
            if (t, k) not in row_of:
                return None
            b[row_of[(t, k)]] = c
    sol = Echelon.of(SparseMatrix(len(row_of), len(unknowns), entries)).solve_sparse(b)
    if sol is None:
        return None
    for j, c in sol.items():
        s, o = unknowns[j]
        psi_values.setdefault(s, {})[o] = c
    return Cochain(basis, phi.nargs - 1, deg, psi_values, cap)
