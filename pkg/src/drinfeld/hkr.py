"""The maps ``f: D -> E(g)`` and ``h: E(g) -> D`` and the cohomology of ``D``.

``f`` applies ``sigma`` factorwise and keeps the summands whose factors all lie
in ``S^1(g) = g``; ``h`` is antisymmetrisation with the ``1/k!`` weight, so that
``f . h = id``.  Tensor arity and wedge arity agree under both maps, and the
scalar line goes to the scalar line.

Cohomology is computed per ``(arity, degree)`` block: ``delta`` preserves the
total monomial degree, for the free kind and for the PBW basis alike.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Mapping

from .complex import _bracket_keys, _differential_key, bracket_raw, differential_raw, tensor_basis
from .envelope import AlgebraError, LieAlgebraSpec, TensorElement, sigma_monomial
from .exterior import LieBasis, PolyVector, bracket_keys, lie_basis, poly_basis, poly_weight, wedge_canonical
from .linalg import Echelon, SparseMatrix, add_scaled, add_term
from .report import Check, timed

__all__ = ["map_f", "map_h", "f_raw", "h_raw", "DeltaSolver", "verify_hkr", "cohomology_table"]


_F_CACHE: dict = {}
_H_CACHE: dict = {}


def _f_key(alg: LieAlgebraSpec, key: tuple) -> dict[tuple, Fraction]:
    ck = (alg, key)
    hit = _F_CACHE.get(ck)
    if hit is not None:
        return hit
    acc: dict[tuple, Fraction] = {(): 1}
    for m in key:
        lin = {ms[0]: c for ms, c in sigma_monomial(alg, m).items() if len(ms) == 1}
        acc = {k + (i,): c * x for k, c in acc.items() for i, x in lin.items()}
        if not acc:
            break
    out: dict[tuple, Fraction] = {}
    for k, c in acc.items():
        can = wedge_canonical(k)
        if can is not None:
            add_term(out, can[1], can[0] * c)
    _F_CACHE[ck] = out
    return out


def f_raw(alg: LieAlgebraSpec, terms: Mapping) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for key, c in terms.items():
        add_scaled(out, _f_key(alg, key), c)
    return out


def map_f(phi: TensorElement) -> PolyVector:
    """``f = f' . sigma``; an identity on the scalar line."""
    return PolyVector(lie_basis(phi.algebra), f_raw(phi.algebra, phi.terms))


def _perm_sign(p: tuple) -> int:
    inv = sum(1 for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b])
    return -1 if inv % 2 else 1


def _h_key(basis: LieBasis, key: tuple) -> dict[tuple, Fraction]:
    ck = (basis.algebra, key)
    hit = _H_CACHE.get(ck)
    if hit is not None:
        return hit
    alg = basis.algebra
    out: dict[tuple, Fraction] = {}
    if alg.is_free and poly_weight(basis, key) > alg.cutoff:
        _H_CACHE[ck] = out
        return out
    w = Fraction(1, math.factorial(len(key)))
    for perm in itertools.permutations(range(len(key))):
        acc: dict[tuple, Fraction] = {(): w * _perm_sign(perm)}
        for p in perm:
            el = basis.elements[key[p]].terms
            acc = {k + (m,): c * x for k, c in acc.items() for m, x in el.items()}
        for k, c in acc.items():
            add_term(out, k, c)
    _H_CACHE[ck] = out
    return out


def h_raw(basis: LieBasis, terms: Mapping) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for key, c in terms.items():
        add_scaled(out, _h_key(basis, key), c)
    return out


def map_h(gamma: PolyVector, arity: int | None = None) -> TensorElement:
    """Antisymmetrisation ``g1^..^gk -> (1/k!) sum sign(s) g_s1 (x) .. (x) g_sk``.

    ``gamma`` must have a single wedge arity; pass ``arity`` for the zero element.
    """
    arities = gamma.arities()
    if len(arities) > 1:
        raise AlgebraError("map_h needs a polyvector of a single wedge arity")
    if arities:
        arity = arities.pop()
    elif arity is None:
        raise AlgebraError("the arity of a zero polyvector must be given")
    return TensorElement(gamma.basis.algebra, arity, h_raw(gamma.basis, gamma.terms))


# ---------------------------------------------------------------------------
# blockwise inversion of delta


def _degree_parts(terms: Mapping) -> dict[int, dict[tuple, Fraction]]:
    parts: dict[int, dict[tuple, Fraction]] = {}
    for key, c in terms.items():
        parts.setdefault(sum(len(m) for m in key), {})[key] = c
    return parts


class DeltaSolver:
    """Cached echelon forms of ``delta`` on each ``(arity, degree)`` block."""

    def __init__(self, algebra: LieAlgebraSpec):
        self.algebra = algebra
        self._bases: dict[tuple[int, int], tuple[list, dict]] = {}
        self._echelons: dict[tuple[int, int], Echelon] = {}

    def basis(self, arity: int, degree: int) -> tuple[list, dict]:
        bk = (arity, degree)
        hit = self._bases.get(bk)
        if hit is None:
            keys = tensor_basis(self.algebra, arity, degree)
            hit = (keys, {k: i for i, k in enumerate(keys)})
            self._bases[bk] = hit
        return hit

    def echelon(self, arity: int, degree: int) -> Echelon:
        """Echelon form of ``delta`` from block ``(arity, degree)`` to ``(arity+1, degree)``."""
        bk = (arity, degree)
        hit = self._echelons.get(bk)
        if hit is not None:
            return hit
        src, _ = self.basis(arity, degree)
        dst, dst_index = self.basis(arity + 1, degree)
        cols = []
        for key in src:
            cols.append({dst_index[k]: c for k, c in _differential_key(self.algebra, key).items()})
        ech = Echelon.of(SparseMatrix.from_columns(len(dst), cols))
        self._echelons[bk] = ech
        return ech

    def rank(self, arity: int, degree: int) -> int:
        return self.echelon(arity, degree).rank

    def solve(self, rhs: Mapping, arity: int) -> dict[tuple, Fraction] | None:
        """Some ``x`` of the given arity with ``delta x = rhs``, or ``None``."""
        out: dict[tuple, Fraction] = {}
        for degree, part in sorted(_degree_parts(rhs).items()):
            if arity < 0:
                return None
            src, _ = self.basis(arity, degree)
            _, dst_index = self.basis(arity + 1, degree)
            b = {}
            for k, c in part.items():
                if k not in dst_index:
                    raise AlgebraError(f"right-hand side term {k} is not of arity {arity + 1}")
                b[dst_index[k]] = c
            sol = self.echelon(arity, degree).solve_sparse(b)
            if sol is None:
                return None
            for j, c in sol.items():
                out[src[j]] = c
        return out


# ---------------------------------------------------------------------------
# verification


def _degree_cap(alg: LieAlgebraSpec, cutoff: int) -> int:
    return min(cutoff, alg.cutoff) if alg.is_free else cutoff


def cohomology_table(algebra: LieAlgebraSpec, max_arity: int, cutoff: int, solver: DeltaSolver | None = None) -> list[dict]:
    """Rows ``{degree, weight, dim, expected}`` for DGLA degrees ``-1..max_arity``."""
    alg = algebra
    solver = solver or DeltaSolver(alg)
    basis = lie_basis(alg)
    cap = _degree_cap(alg, cutoff)
    rows = []
    for k in range(-1, max_arity + 1):
        a = k + 1
        for w in range(cap + 1):
            n = len(solver.basis(a, w)[0])
            if n == 0:
                continue
            kernel = n - solver.rank(a, w)
            image = solver.rank(a - 1, w) if a >= 1 else 0
            expected = sum(1 for key in itertools.combinations(range(len(basis)), a) if poly_weight(basis, key) == w)
            rows.append({"degree": k, "weight": w, "dim": kernel - image, "expected": expected})
    return rows


def _fmt_poly(basis: LieBasis, d: Mapping) -> str:
    from .expr import format_poly

    return format_poly(PolyVector(basis, d))


def verify_hkr(algebra: LieAlgebraSpec, max_arity: int, cutoff: int) -> tuple[list[Check], list[dict]]:
    """Check ``f.h = id``, ``f.delta = 0``, ``delta.h = 0``, the cohomology
    dimensions and the induced bracket.  Returns the checks and the table."""
    alg = algebra
    basis = lie_basis(alg)
    cap = _degree_cap(alg, cutoff)
    polys = poly_basis(basis, max_arity + 1, cap, min_arity=0)
    solver = DeltaSolver(alg)
    checks = []

    with timed() as t:
        bad = None
        for key in polys:
            back = f_raw(alg, _h_key(basis, key))
            if back != {key: 1}:
                bad = bad or {"element": _fmt_poly(basis, {key: 1}), "f_h": _fmt_poly(basis, back)}
    checks.append(Check("f_after_h_is_identity", bad is None, {"checked": len(polys), "counterexample": bad}, t.ms))

    with timed() as t:
        bad = None
        count = 0
        for a in range(0, max_arity + 2):
            for w in range(cap + 1):
                for key in solver.basis(a, w)[0]:
                    count += 1
                    img = f_raw(alg, _differential_key(alg, key))
                    if img:
                        bad = bad or {"element": _fmt_key(alg, key), "f_delta": _fmt_poly(basis, img)}
    checks.append(Check("f_kills_coboundaries", bad is None, {"checked": count, "counterexample": bad}, t.ms))

    with timed() as t:
        bad = None
        for key in polys:
            d = differential_raw(alg, _h_key(basis, key))
            if d:
                bad = bad or {"element": _fmt_poly(basis, {key: 1})}
    checks.append(Check("h_lands_in_cocycles", bad is None, {"checked": len(polys), "counterexample": bad}, t.ms))

    with timed() as t:
        table = cohomology_table(alg, max_arity, cap, solver)
        wrong = [row for row in table if row["dim"] != row["expected"]]
        scalar = [row for row in table if row["degree"] == -1]
        ok = not wrong and [r["dim"] for r in scalar] == [1]
    checks.append(Check("cohomology_dimensions", ok, {"blocks": len(table), "mismatches": wrong}, t.ms))

    with timed() as t:
        bad = None
        count = 0
        positive = [k for k in polys if k]
        for k1, k2 in itertools.product(positive, repeat=2):
            if alg.is_free and poly_weight(basis, k1) + poly_weight(basis, k2) > cap:
                continue
            count += 1
            lhs = f_raw(alg, bracket_raw(alg, _h_key(basis, k1), _h_key(basis, k2)))
            rhs = bracket_keys(basis, k1, k2)
            if lhs != rhs:
                bad = bad or {
                    "pair": [_fmt_poly(basis, {k1: 1}), _fmt_poly(basis, {k2: 1})],
                    "f_bracket": _fmt_poly(basis, lhs),
                    "ext_bracket": _fmt_poly(basis, rhs),
                }
    checks.append(Check("induced_bracket", bad is None, {"checked": count, "counterexample": bad}, t.ms))
    return checks, table


def _fmt_key(alg: LieAlgebraSpec, key: tuple) -> str:
    from .expr import format_tensor

    return format_tensor(TensorElement(alg, len(key), {key: 1}))
