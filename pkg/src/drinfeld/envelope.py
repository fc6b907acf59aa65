"""Universal enveloping algebras in canonical bases.

Two kinds of Lie algebra are supported:

* ``free``: the free Lie algebra on ``n`` generators.  Its enveloping algebra is
  the free associative algebra, so monomials are arbitrary words.  Words
  longer than ``cutoff`` are dropped, i.e. we work in the nilpotent quotient.
* ``structure``: a finite-dimensional algebra given by structure constants.
  Monomials are weakly increasing words (PBW order ``e1 < e2 < ...``) and
  products are straightened with ``e_j e_i = e_i e_j + [e_j, e_i]``.

A monomial is always a tuple of 0-based generator indices; ``()`` is the unit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .linalg import Echelon, SparseMatrix, add_scaled, add_term

Monomial = tuple  # tuple[int, ...]


class AlgebraError(ValueError):
    pass


def _num(c):
    """Exact scalar, kept as ``int`` when integral (much faster than Fraction)."""
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


@dataclass(frozen=True)
class LieAlgebraSpec:
    kind: str
    names: tuple
    cutoff: int | None = None
    # ((i, j), ((k, c), ...)) for i < j; only used by the structure kind
    constants: tuple = ()

    # -- constructors -----------------------------------------------------
    @classmethod
    def free(cls, generator_count: int, degree_cutoff: int) -> "LieAlgebraSpec":
        if generator_count < 1:
            raise AlgebraError("a free Lie algebra needs at least one generator")
        if degree_cutoff < 1:
            raise AlgebraError("degree cutoff must be at least 1")
        names = tuple(f"e{i + 1}" for i in range(generator_count))
        return cls("free", names, degree_cutoff)

    @classmethod
    def from_structure_constants(cls, names: Iterable[str], table: Mapping) -> "LieAlgebraSpec":
        """``table[(i, j)] = {k: c}`` gives ``[e_i, e_j] = sum_k c e_k``.

        Pairs may be listed in either order; the antisymmetric partner is
        checked if both are present and inferred otherwise.
        """
        names = tuple(names)
        n = len(names)
        full: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in table.items():
            if not (0 <= i < n and 0 <= j < n):
                raise AlgebraError(f"bracket index {(i, j)} out of range")
            row = {k: _num(c) for k, c in row.items() if c}
            if i == j and row:
                raise AlgebraError(f"[e{i + 1}, e{i + 1}] must vanish")
            if (j, i) in table:
                other = {k: _num(c) for k, c in table[(j, i)].items() if c}
                if other != {k: -c for k, c in row.items()}:
                    raise AlgebraError(f"structure constants not antisymmetric at {(i, j)}")
            full[(i, j)] = row
            full[(j, i)] = {k: -c for k, c in row.items()}
        constants = tuple(
            ((i, j), tuple(sorted(full[(i, j)].items())))
            for i in range(n)
            for j in range(i + 1, n)
            if full.get((i, j))
        )
        alg = cls("structure", names, None, constants)
        alg._check_jacobi()
        return alg

    @classmethod
    def borel(cls) -> "LieAlgebraSpec":
        """The two-dimensional algebra with ``[e1, e2] = 2 e1``."""
        return cls.from_structure_constants(("e1", "e2"), {(0, 1): {0: 2}})

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebraSpec":
        return cls.from_structure_constants(tuple(f"e{i + 1}" for i in range(dim)), {})

    # -- basic data -------------------------------------------------------
    @property
    def ngens(self) -> int:
        return len(self.names)

    @property
    def is_free(self) -> bool:
        return self.kind == "free"

    def label(self) -> str:
        if self.is_free:
            return f"free:{self.ngens}"
        if self == LieAlgebraSpec.borel():
            return "borel"
        if not self.constants:
            return f"abelian:{self.ngens}"
        return "structure"

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.kind, self.names, self.cutoff, self.constants))
            object.__setattr__(self, "_hash", h)
        return h

    def generator_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """``[e_i, e_j]`` in generator coordinates (structure kind only)."""
        table = self.__dict__.get("_table")
        if table is None:
            table = {}
            for (a, b), row in self.constants:
                table[(a, b)] = dict(row)
                table[(b, a)] = {k: -c for k, c in row}
            object.__setattr__(self, "_table", table)
        return table.get((i, j), {})

    def _check_jacobi(self) -> None:
        n = self.ngens
        for i, j, k in itertools.combinations(range(n), 3):
            total: dict[int, Fraction] = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, x in self.generator_bracket(b, c).items():
                    add_scaled(total, self.generator_bracket(a, m), x)
            if total:
                raise AlgebraError(f"Jacobi identity fails on {(i, j, k)}")

    def is_canonical(self, m: Monomial) -> bool:
        if any(not (0 <= g < self.ngens) for g in m):
            return False
        if self.is_free:
            return len(m) <= self.cutoff
        return all(m[i] <= m[i + 1] for i in range(len(m) - 1))

    def check_same(self, other: "LieAlgebraSpec") -> None:
        if self != other:
            raise AlgebraError("operands live over different algebras")


# ---------------------------------------------------------------------------
# monomial arithmetic on raw dicts

_NF_CACHE: dict = {}


def normal_form(alg: LieAlgebraSpec, word: Monomial) -> dict[Monomial, Fraction]:
    """Canonical form of an arbitrary word of generators."""
    if alg.is_free:
        return {word: 1} if len(word) <= alg.cutoff else {}
    key = (alg, word)
    hit = _NF_CACHE.get(key)
    if hit is not None:
        return hit
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            break
    else:
        res = {word: 1}
        _NF_CACHE[key] = res
        return res
    j, k = word[i], word[i + 1]
    res: dict[Monomial, Fraction] = {}
    add_scaled(res, normal_form(alg, word[:i] + (k, j) + word[i + 2 :]))
    for g, c in alg.generator_bracket(j, k).items():
        add_scaled(res, normal_form(alg, word[:i] + (g,) + word[i + 2 :]), c)
    _NF_CACHE[key] = res
    return res


def mul_monomials(alg: LieAlgebraSpec, a: Monomial, b: Monomial) -> dict[Monomial, Fraction]:
    if not a:
        return {b: 1}
    if not b:
        return {a: 1}
    return normal_form(alg, a + b)


def mul_dicts(alg: LieAlgebraSpec, x: Mapping, y: Mapping) -> dict[Monomial, Fraction]:
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            add_scaled(out, mul_monomials(alg, m1, m2), c1 * c2)
    return out


_DELTA_CACHE: dict = {}


def delta_power_monomial(m: Monomial, k: int) -> dict[tuple, Fraction]:
    """``Delta^k`` of a monomial: every letter goes to one of ``k+1`` slots.

    Subwords of canonical words are canonical in both kinds, so no
    renormalisation is needed.
    """
    key = (m, k)
    hit = _DELTA_CACHE.get(key)
    if hit is not None:
        return hit
    out: dict[tuple, Fraction] = {}
    for slots in itertools.product(range(k + 1), repeat=len(m)):
        parts = [[] for _ in range(k + 1)]
        for letter, s in zip(m, slots):
            parts[s].append(letter)
        add_term(out, tuple(tuple(p) for p in parts), 1)
    _DELTA_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# element classes


class NCElement:
    """Element of ``U(g)`` as a sparse map canonical monomial -> coefficient."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: LieAlgebraSpec, terms: Mapping | None = None):
        self.algebra = algebra
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if not algebra.is_canonical(m):
                add_scaled(clean, normal_form(algebra, m), Fraction(c))
            else:
                add_term(clean, m, Fraction(c))
        self.terms = clean

    @classmethod
    def unit(cls, algebra: LieAlgebraSpec) -> "NCElement":
        return cls(algebra, {(): 1})

    @classmethod
    def gen(cls, algebra: LieAlgebraSpec, i: int) -> "NCElement":
        return cls(algebra, {(i,): 1})

    @classmethod
    def word(cls, algebra: LieAlgebraSpec, letters: Iterable[int], coeff=1) -> "NCElement":
        return cls(algebra, {tuple(letters): coeff})

    def __add__(self, other: "NCElement") -> "NCElement":
        self.algebra.check_same(other.algebra)
        d = dict(self.terms)
        add_scaled(d, other.terms)
        return NCElement(self.algebra, d)

    def __neg__(self) -> "NCElement":
        return NCElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "NCElement") -> "NCElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NCElement):
            return nc_mul(self, other)
        return NCElement(self.algebra, {m: c * other for m, c in self.terms.items()})

    def __rmul__(self, c):
        return NCElement(self.algebra, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, NCElement) and self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def __repr__(self):
        from .expr import format_nc

        return f"NCElement({format_nc(self)!r})"


def nc_mul(a: NCElement, b: NCElement) -> NCElement:
    a.algebra.check_same(b.algebra)
    return NCElement(a.algebra, mul_dicts(a.algebra, a.terms, b.terms))


def commutator(a: NCElement, b: NCElement) -> NCElement:
    return nc_mul(a, b) - nc_mul(b, a)


class TensorElement:
    """Element of ``D^k = U^{(x)(k+1)}``; ``arity`` counts tensor factors.

    ``arity == 0`` is the scalar line ``D^{-1}``, whose only key is ``()``.
    The DGLA degree is ``arity - 1``.
    """

    __slots__ = ("algebra", "arity", "terms")

    def __init__(self, algebra: LieAlgebraSpec, arity: int, terms: Mapping | None = None):
        if arity < 0:
            raise AlgebraError("arity must be non-negative")
        self.algebra = algebra
        self.arity = arity
        clean: dict[tuple, Fraction] = {}
        for key, c in (terms or {}).items():
            key = tuple(tuple(m) for m in key)
            if len(key) != arity:
                raise AlgebraError(f"tensor key {key} does not have {arity} factors")
            if all(algebra.is_canonical(m) for m in key):
                if algebra.is_free and sum(map(len, key)) > algebra.cutoff:
                    continue
                add_term(clean, key, Fraction(c))
            else:
                add_scaled(clean, _canonical_tensor(algebra, key), Fraction(c))
        self.terms = clean

    @property
    def degree(self) -> int:
        return self.arity - 1

    @classmethod
    def scalar(cls, algebra: LieAlgebraSpec, c=1) -> "TensorElement":
        return cls(algebra, 0, {(): c})

    @classmethod
    def unit(cls, algebra: LieAlgebraSpec, arity: int) -> "TensorElement":
        return cls(algebra, arity, {((),) * arity: 1})

    @classmethod
    def from_nc(cls, a: NCElement) -> "TensorElement":
        return cls(a.algebra, 1, {(m,): c for m, c in a.terms.items()})

    @classmethod
    def tensor(cls, *factors: NCElement) -> "TensorElement":
        alg = factors[0].algebra
        terms: dict[tuple, Fraction] = {}
        for combo in itertools.product(*(f.terms.items() for f in factors)):
            key = tuple(m for m, _ in combo)
            add_term(terms, key, math.prod((c for _, c in combo), start=Fraction(1)))
        return cls(alg, len(factors), terms)

    def _same(self, other: "TensorElement") -> None:
        self.algebra.check_same(other.algebra)
        if self.arity != other.arity:
            raise AlgebraError(f"cannot add arity {self.arity} to arity {other.arity}")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._same(other)
        d = dict(self.terms)
        add_scaled(d, other.terms)
        return TensorElement(self.algebra, self.arity, d)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.algebra, self.arity, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __mul__(self, c) -> "TensorElement":
        if isinstance(c, TensorElement):
            return TensorElement(self.algebra, self.arity, componentwise_mul(self.algebra, self.terms, c.terms))
        return TensorElement(self.algebra, self.arity, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, TensorElement)
            and self.algebra == other.algebra
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.algebra, self.arity, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        from .expr import format_tensor

        return f"TensorElement(arity={self.arity}, {format_tensor(self)!r})"


def _canonical_tensor(alg: LieAlgebraSpec, key: tuple) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {(): Fraction(1)}
    for m in key:
        nxt: dict[tuple, Fraction] = {}
        for pre, c in out.items():
            for nm, c2 in normal_form(alg, tuple(m)).items():
                add_term(nxt, pre + (nm,), c * c2)
        out = nxt
    if alg.is_free:
        out = {k: c for k, c in out.items() if sum(map(len, k)) <= alg.cutoff}
    return out


def componentwise_mul(alg: LieAlgebraSpec, x: Mapping, y: Mapping) -> dict[tuple, Fraction]:
    """Product in ``U^{(x)n}`` of two raw tensors with the same number of factors."""
    out: dict[tuple, Fraction] = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            if alg.is_free and sum(map(len, k1)) + sum(map(len, k2)) > alg.cutoff:
                continue
            acc: dict[tuple, Fraction] = {(): c1 * c2}
            for a, b in zip(k1, k2):
                prod = mul_monomials(alg, a, b)
                if not prod:
                    acc = {}
                    break
                acc = {pre + (m,): c * pc for pre, c in acc.items() for m, pc in prod.items()}
            add_scaled(out, acc)
    return out


# ---------------------------------------------------------------------------
# coproduct


def coproduct(a: NCElement) -> TensorElement:
    """``Delta`` extended multiplicatively from primitive generators."""
    return iterated_coproduct(a, 1)


def iterated_coproduct(a: NCElement, k: int) -> TensorElement:
    """``Delta^k : U -> U^{(x)(k+1)}``; ``Delta^0`` is the identity."""
    if k < 0:
        raise AlgebraError("iterated coproduct needs k >= 0")
    out: dict[tuple, Fraction] = {}
    for m, c in a.terms.items():
        add_scaled(out, delta_power_monomial(m, k), c)
    return TensorElement(a.algebra, k + 1, out)


# ---------------------------------------------------------------------------
# symmetric algebra and the PBW map


class SymElement:
    """Element of ``S(g)``: sorted tuples of Lie-basis indices -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean: dict[tuple, Fraction] = {}
        for ms, c in (terms or {}).items():
            add_term(clean, tuple(sorted(ms)), Fraction(c))
        self.terms = clean

    def __add__(self, other: "SymElement") -> "SymElement":
        d = dict(self.terms)
        add_scaled(d, other.terms)
        return SymElement(d)

    def __eq__(self, other):
        return isinstance(other, SymElement) and self.terms == other.terms

    def __repr__(self):
        return f"SymElement({self.terms!r})"

    def component(self, degree: int) -> dict[tuple, Fraction]:
        return {ms: c for ms, c in self.terms.items() if len(ms) == degree}

    def linear_part(self) -> dict[int, Fraction]:
        return {ms[0]: c for ms, c in self.terms.items() if len(ms) == 1}


def _distinct_orderings(ms: tuple) -> list[tuple]:
    return sorted(set(itertools.permutations(ms)))


def sym(algebra: LieAlgebraSpec, s: SymElement) -> NCElement:
    """Symmetrisation ``S(g) -> U(g)``: average of all orderings of a product."""
    from .exterior import lie_basis

    basis = lie_basis(algebra)
    out: dict[Monomial, Fraction] = {}
    for ms, c in s.terms.items():
        add_scaled(out, _sym_multiset(algebra, basis, ms), c)
    return NCElement(algebra, out)


_SYM_CACHE: dict = {}


def _sym_multiset(algebra, basis, ms: tuple) -> dict[Monomial, Fraction]:
    key = (algebra, ms)
    hit = _SYM_CACHE.get(key)
    if hit is not None:
        return hit
    orders = _distinct_orderings(ms)
    out: dict[Monomial, Fraction] = {}
    w = Fraction(1, len(orders))
    for order in orders:
        acc: dict[Monomial, Fraction] = {(): Fraction(1)}
        for idx in order:
            acc = mul_dicts(algebra, acc, basis.elements[idx].terms)
            if not acc:
                break
        add_scaled(out, acc, w)
    _SYM_CACHE[key] = out
    return out


_SIGMA_CACHE: dict = {}


def sigma_monomial(algebra: LieAlgebraSpec, m: Monomial) -> dict[tuple, Fraction]:
    """``sigma`` of one canonical monomial, as a raw symmetric-algebra dict."""
    key = (algebra, m)
    hit = _SIGMA_CACHE.get(key)
    if hit is not None:
        return hit
    if algebra.is_free:
        if len(m) > algebra.cutoff:
            raise AlgebraError(f"word of length {len(m)} exceeds cutoff {algebra.cutoff}")
        _fill_free_sigma(algebra, len(m))
        return _SIGMA_CACHE[key]
    # sym(m) = m + lower-degree terms, so sigma(m) = [m] + sigma(m - sym(m))
    res: dict[tuple, Fraction] = {m: Fraction(1)}
    if len(m) > 1:
        from .exterior import lie_basis

        rest = {m: Fraction(1)}
        add_scaled(rest, _sym_multiset(algebra, lie_basis(algebra), m), -1)
        for mm, c in rest.items():
            add_scaled(res, sigma_monomial(algebra, mm), c)
    _SIGMA_CACHE[key] = res
    return res


def _fill_free_sigma(algebra: LieAlgebraSpec, w: int) -> None:
    """Invert symmetrisation on the weight-``w`` words in one linear solve."""
    from .exterior import lie_basis

    basis = lie_basis(algebra)
    words = list(itertools.product(range(algebra.ngens), repeat=w))
    word_index = {x: i for i, x in enumerate(words)}
    multisets = _multisets_of_weight(basis.weights, w)
    if len(multisets) != len(words):
        raise AlgebraError("symmetrised Lyndon monomials do not match word count")
    cols = []
    for ms in multisets:
        cols.append({word_index[x]: c for x, c in _sym_multiset(algebra, basis, ms).items()})
    ech = Echelon.of(SparseMatrix.from_columns(len(words), cols))
    if ech.rank != len(words):
        raise AlgebraError("symmetrisation is not invertible at this weight")
    for x, i in word_index.items():
        sol = ech.solve_sparse({i: 1})
        _SIGMA_CACHE[(algebra, x)] = {multisets[j]: c for j, c in sol.items()}


def _multisets_of_weight(weights: list[int], w: int) -> list[tuple]:
    out = []

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(weights)):
            if weights[i] <= remaining:
                acc.append(i)
                rec(i, remaining - weights[i], acc)
                acc.pop()

    rec(0, w, [])
    return out


def pbw_sigma(a: NCElement) -> SymElement:
    """Inverse of symmetrisation, computed degreewise."""
    out: dict[tuple, Fraction] = {}
    for m, c in a.terms.items():
        add_scaled(out, sigma_monomial(a.algebra, m), c)
    return SymElement(out)
