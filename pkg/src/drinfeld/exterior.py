"""The graded Lie algebra ``E(g)`` of polyvectors.

A polyvector key is a strictly increasing tuple of Lie-basis indices; its
wedge arity is the tuple length and its DGLA degree is ``arity - 1``.  The
bracket is the biderivation extension of the Lie bracket of ``g``.

For the free kind ``g`` is the free nilpotent Lie algebra of class
``cutoff``: brackets of weight above the cutoff vanish, every wedge factor has
weight at most the cutoff, but a wedge may have larger total weight.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping

from sympy import divisors, mobius

from .envelope import AlgebraError, LieAlgebraSpec, NCElement, commutator
from .linalg import add_scaled, add_term


# ---------------------------------------------------------------------------
# Lyndon words


def lyndon_words(k: int, n: int) -> list[tuple]:
    """All Lyndon words of length ``<= n`` over ``range(k)``, in lex order (Duval)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_factorization(w: tuple) -> tuple[tuple, tuple]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise ValueError(f"{w} has no proper Lyndon suffix")


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def witt_dimension(k: int, n: int) -> int:
    """Dimension of the degree-``n`` part of the free Lie algebra on ``k`` letters."""
    return sum(int(mobius(d)) * k ** (n // d) for d in divisors(n)) // n


class LieBasis:
    """Ordered basis of ``g`` with brackets expressed back in the basis."""

    def __init__(self, algebra: LieAlgebraSpec, words: list[tuple], elements: list[NCElement], names: list[str]):
        self.algebra = algebra
        self.words = words
        self.elements = elements
        self.names = names
        self.weights = [len(w) for w in words]
        self.index = {w: i for i, w in enumerate(words)}
        self._brackets: dict[tuple[int, int], dict[int, Fraction]] = {}

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"LieBasis({self.algebra.label()}, {self.names})"

    def coords(self, x: Mapping) -> dict[int, Fraction]:
        """Coordinates of a Lie element given in the monomial basis of ``U``."""
        alg = self.algebra
        if not alg.is_free:
            out = {}
            for m, c in x.items():
                if len(m) != 1:
                    raise AlgebraError(f"{m} is not a Lie-basis monomial")
                out[m[0]] = Fraction(c)
            return out
        rest = dict(x)
        out: dict[int, Fraction] = {}
        while rest:
            w = min(rest)
            i = self.index.get(w)
            if i is None:
                raise AlgebraError(f"element is not in the Lie subalgebra (leading word {w})")
            c = rest[w]
            out[i] = c
            add_scaled(rest, self.elements[i].terms, -c)
        return out

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        key = (i, j)
        hit = self._brackets.get(key)
        if hit is not None:
            return hit
        alg = self.algebra
        if i == j:
            res = {}
        elif not alg.is_free:
            res = alg.generator_bracket(i, j)
        elif self.weights[i] + self.weights[j] > alg.cutoff:
            res = {}
        else:
            res = self.coords(commutator(self.elements[i], self.elements[j]).terms)
        self._brackets[key] = res
        return res


_BASIS_CACHE: dict = {}


def lyndon_basis(generator_count: int, degree_cutoff: int) -> LieBasis:
    return lie_basis(LieAlgebraSpec.free(generator_count, degree_cutoff))


def lie_basis(algebra: LieAlgebraSpec) -> LieBasis:
    hit = _BASIS_CACHE.get(algebra)
    if hit is not None:
        return hit
    if algebra.is_free:
        words = sorted(lyndon_words(algebra.ngens, algebra.cutoff), key=lambda w: (len(w), w))
        elems: dict[tuple, NCElement] = {}
        names: dict[tuple, str] = {}
        for w in words:
            if len(w) == 1:
                elems[w] = NCElement.gen(algebra, w[0])
                names[w] = algebra.names[w[0]]
            else:
                u, v = standard_factorization(w)
                elems[w] = commutator(elems[u], elems[v])
                names[w] = f"[{names[u]},{names[v]}]"
        basis = LieBasis(algebra, words, [elems[w] for w in words], [names[w] for w in words])
    else:
        words = [(i,) for i in range(algebra.ngens)]
        basis = LieBasis(
            algebra, words, [NCElement.gen(algebra, i) for i in range(algebra.ngens)], list(algebra.names)
        )
    _BASIS_CACHE[algebra] = basis
    return basis


# ---------------------------------------------------------------------------
# polyvectors


def wedge_canonical(indices: Iterable[int]) -> tuple[int, tuple] | None:
    """Sort wedge factors; return ``(sign, key)`` or ``None`` on a repeat."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign, tuple(sorted(idx))


class PolyVector:
    """Element of ``E(g)``: strictly increasing index tuples -> coefficient."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: LieBasis, terms: Mapping | None = None):
        self.basis = basis
        clean: dict[tuple, Fraction] = {}
        n = len(basis)
        for key, c in (terms or {}).items():
            if any(not (0 <= i < n) for i in key):
                raise AlgebraError(f"polyvector index out of range in {key}")
            can = wedge_canonical(key)
            if can is None:
                continue
            s, k = can
            add_term(clean, k, s * Fraction(c))
        self.terms = clean

    @classmethod
    def wedge(cls, basis: LieBasis, *indices: int, coeff=1) -> "PolyVector":
        return cls(basis, {tuple(indices): coeff})

    @classmethod
    def scalar(cls, basis: LieBasis, c=1) -> "PolyVector":
        return cls(basis, {(): c})

    def _check(self, other: "PolyVector") -> None:
        if self.basis is not other.basis and self.basis.algebra != other.basis.algebra:
            raise AlgebraError("polyvectors over different Lie bases")

    def __add__(self, other: "PolyVector") -> "PolyVector":
        self._check(other)
        d = dict(self.terms)
        add_scaled(d, other.terms)
        return PolyVector(self.basis, d)

    def __neg__(self) -> "PolyVector":
        return PolyVector(self.basis, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "PolyVector") -> "PolyVector":
        return self + (-other)

    def __mul__(self, c) -> "PolyVector":
        return PolyVector(self.basis, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "PolyVector") -> "PolyVector":
        self._check(other)
        out: dict[tuple, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                add_term(out, k1 + k2, c1 * c2)  # constructor canonicalises
        return PolyVector(self.basis, out)

    def __eq__(self, other):
        return isinstance(other, PolyVector) and self.basis.algebra == other.basis.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def arities(self) -> set[int]:
        return {len(k) for k in self.terms}

    def __repr__(self):
        from .expr import format_poly

        return f"PolyVector({format_poly(self)!r})"


def _wedge_into(out: dict, factors: list[int], coeff) -> None:
    can = wedge_canonical(factors)
    if can is not None:
        s, k = can
        add_term(out, k, s * coeff)


def bracket_keys(basis: LieBasis, a: tuple, b: tuple) -> dict[tuple, Fraction]:
    """Bracket of two wedge monomials (raw dict result).

    ``[a_1..a_p, b_1..b_q] = (-1)^((p-1)(q-1)) sum (-1)^(i+j) [a_i, b_j] ^ (a without a_i) ^ (b without b_j)``.
    The sum alone is the Schouten bracket; the prefactor is the sign carried
    by the bracket that the Drinfeld DGLA induces on its cohomology, and the
    two brackets are isomorphic through ``x -> (-1)^(k(k-1)/2) x`` in DGLA degree ``k``.
    """
    out: dict[tuple, Fraction] = {}
    twist = -1 if (len(a) - 1) * (len(b) - 1) % 2 else 1
    for i, ai in enumerate(a):
        rest_a = list(a[:i] + a[i + 1 :])
        for j, bj in enumerate(b):
            br = basis.bracket(ai, bj)
            if not br:
                continue
            sign = twist * (-1 if (i + j) % 2 else 1)
            rest = rest_a + list(b[:j] + b[j + 1 :])
            for k, c in br.items():
                _wedge_into(out, [k] + rest, sign * c)
    return out


def bracket_dicts(basis: LieBasis, x: Mapping, y: Mapping) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            add_scaled(out, bracket_keys(basis, k1, k2), c1 * c2)
    return out


def ext_bracket(g1: PolyVector, g2: PolyVector) -> PolyVector:
    """Graded Lie bracket on ``E(g)`` extending the bracket of ``g``."""
    g1._check(g2)
    return PolyVector(g1.basis, bracket_dicts(g1.basis, g1.terms, g2.terms))


def is_triangular(r: PolyVector) -> bool:
    """Whether ``r`` in wedge-square of ``g`` satisfies ``[r, r] = 0``."""
    if r.arities() - {2}:
        raise AlgebraError("an r-matrix must be homogeneous of wedge arity 2")
    return not ext_bracket(r, r)


def poly_weight(basis: LieBasis, key: tuple) -> int:
    return sum(basis.weights[i] for i in key)


def poly_basis(basis: LieBasis, max_arity: int, max_weight: int | None = None, min_arity: int = 1) -> list[tuple]:
    """Wedge monomials with arity in ``[min_arity, max_arity]`` (and bounded total weight)."""
    out = []
    n = len(basis)
    for a in range(min_arity, max_arity + 1):
        for key in itertools.combinations(range(n), a):
            if max_weight is None or poly_weight(basis, key) <= max_weight:
                out.append(key)
    return out
