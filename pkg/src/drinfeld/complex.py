"""The DGLA of Drinfeld on the tensor powers of ``U(g)``.

Elements are :class:`~drinfeld.envelope.TensorElement` values; an element with
``arity`` tensor factors lies in ``D^(arity-1)``.  The raw helpers below work
on ``{key: coeff}`` dicts and cache everything on basis keys, which is what
keeps the exhaustive checks affordable.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .envelope import (
    AlgebraError,
    LieAlgebraSpec,
    TensorElement,
    delta_power_monomial,
    mul_monomials,
)
from .linalg import add_scaled, add_term
from .report import Check, timed

__all__ = [
    "differential",
    "circle",
    "bracket_g",
    "verify_dgla",
    "tensor_basis",
    "differential_raw",
    "bracket_raw",
]


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _key_degree(key: tuple) -> int:
    return sum(len(m) for m in key)


# ---------------------------------------------------------------------------
# differential

_D_CACHE: dict = {}


def _differential_key(alg: LieAlgebraSpec, key: tuple) -> dict[tuple, Fraction]:
    hit = _D_CACHE.get((alg, key))
    if hit is not None:
        return hit
    out: dict[tuple, Fraction] = {}
    k = len(key) - 1
    if k >= 0:
        add_term(out, key + ((),), 1)
        for l in range(k + 1):
            s = -_sign(k - l)
            for parts, c in delta_power_monomial(key[l], 1).items():
                add_term(out, key[:l] + parts + key[l + 1 :], s * c)
        add_term(out, ((),) + key, _sign(k))
    _D_CACHE[(alg, key)] = out
    return out


def differential_raw(alg: LieAlgebraSpec, terms: Mapping) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for key, c in terms.items():
        add_scaled(out, _differential_key(alg, key), c)
    return out


def differential(phi: TensorElement) -> TensorElement:
    """``delta : D^k -> D^(k+1)``; zero on the scalar line."""
    return TensorElement(phi.algebra, phi.arity + 1, differential_raw(phi.algebra, phi.terms))


# ---------------------------------------------------------------------------
# circle product and bracket

_CIRCLE_CACHE: dict = {}
_BRACKET_CACHE: dict = {}


_CT_CACHE: dict = {}


def _coproduct_times(alg: LieAlgebraSpec, m: tuple, key2: tuple) -> dict[tuple, int]:
    """``Delta^k2(m) . key2`` in ``U^(x)(k2+1)``."""
    ck = (alg, m, key2)
    hit = _CT_CACHE.get(ck)
    if hit is not None:
        return hit
    out: dict[tuple, int] = {}
    for parts, c in delta_power_monomial(m, len(key2) - 1).items():
        acc = {(): c}
        for a, b in zip(parts, key2):
            prod = mul_monomials(alg, a, b)
            if len(prod) == 1:
                (pm, pc), = prod.items()
                acc = {pre + (pm,): x * pc for pre, x in acc.items()}
            else:
                acc = {pre + (pm,): x * pc for pre, x in acc.items() for pm, pc in prod.items()}
            if not acc:
                break
        for k, v in acc.items():
            v0 = out.get(k)
            if v0 is None:
                out[k] = v
            else:
                v0 += v
                if v0:
                    out[k] = v0
                else:
                    del out[k]
    _CT_CACHE[ck] = out
    return out


def _circle_keys(alg: LieAlgebraSpec, key1: tuple, key2: tuple) -> dict[tuple, Fraction]:
    ck = (alg, key1, key2)
    hit = _CIRCLE_CACHE.get(ck)
    if hit is not None:
        return hit
    out: dict[tuple, Fraction] = {}
    if alg.is_free and _key_degree(key1) + _key_degree(key2) > alg.cutoff:
        _CIRCLE_CACHE[ck] = out
        return out
    k2 = len(key2) - 1
    for i in range(len(key1)):
        s = _sign(i * k2)
        pre, post = key1[:i], key1[i + 1 :]
        for t, c in _coproduct_times(alg, key1[i], key2).items():
            add_term(out, pre + t + post, s * c)
    _CIRCLE_CACHE[ck] = out
    return out


def _bracket_keys(alg: LieAlgebraSpec, key1: tuple, key2: tuple) -> dict[tuple, Fraction]:
    bk = (alg, key1, key2)
    hit = _BRACKET_CACHE.get(bk)
    if hit is not None:
        return hit
    if not key1 or not key2:
        # the scalar line is central
        out: dict[tuple, Fraction] = {}
    else:
        k1, k2 = len(key1) - 1, len(key2) - 1
        out = dict(_circle_keys(alg, key1, key2))
        add_scaled(out, _circle_keys(alg, key2, key1), -_sign(k1 * k2))
    _BRACKET_CACHE[bk] = out
    return out


def circle_raw(alg: LieAlgebraSpec, x: Mapping, y: Mapping) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            add_scaled(out, _circle_keys(alg, k1, k2), c1 * c2)
    return out


def bracket_raw(alg: LieAlgebraSpec, x: Mapping, y: Mapping) -> dict[tuple, Fraction]:
    """Bracket on raw dicts; scalar-line operands contribute zero."""
    out: dict[tuple, Fraction] = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            add_scaled(out, _bracket_keys(alg, k1, k2), c1 * c2)
    return out


def _check_operands(phi1: TensorElement, phi2: TensorElement) -> None:
    phi1.algebra.check_same(phi2.algebra)
    if phi1.arity == 0 or phi2.arity == 0:
        raise AlgebraError("the circle product is not defined on the scalar line D^-1")


def circle(phi1: TensorElement, phi2: TensorElement) -> TensorElement:
    _check_operands(phi1, phi2)
    return TensorElement(phi1.algebra, phi1.arity + phi2.arity - 1, circle_raw(phi1.algebra, phi1.terms, phi2.terms))


def bracket_g(phi1: TensorElement, phi2: TensorElement) -> TensorElement:
    """``[x, y] = x o y - (-1)^(k1 k2) y o x`` with ``k`` the DGLA degrees."""
    _check_operands(phi1, phi2)
    return TensorElement(phi1.algebra, phi1.arity + phi2.arity - 1, bracket_raw(phi1.algebra, phi1.terms, phi2.terms))


# ---------------------------------------------------------------------------
# bases and exhaustive verification


def monomials_of_degree(alg: LieAlgebraSpec, d: int) -> list[tuple]:
    if alg.is_free:
        return list(itertools.product(range(alg.ngens), repeat=d))
    return list(itertools.combinations_with_replacement(range(alg.ngens), d))


def tensor_basis(alg: LieAlgebraSpec, arity: int, degree: int) -> list[tuple]:
    """Basis keys of ``D^(arity-1)`` with total monomial degree exactly ``degree``."""
    if arity == 0:
        return [()] if degree == 0 else []
    out = []
    for split in _compositions(degree, arity):
        for combo in itertools.product(*(monomials_of_degree(alg, d) for d in split)):
            out.append(tuple(combo))
    return out


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _basis_upto(alg: LieAlgebraSpec, arity: int, max_degree: int) -> list[tuple]:
    return [k for d in range(max_degree + 1) for k in tensor_basis(alg, arity, d)]


def _first(items):
    return next(iter(items), None)


def verify_dgla(algebra: LieAlgebraSpec, max_arity: int, degree_cutoff: int, jacobi: bool = True) -> list[Check]:
    """Exhaustively check the DGLA axioms on basis elements of ``D^-1 .. D^max_arity``.

    ``max_arity`` is the top DGLA degree ``k``; basis elements have total
    monomial degree at most ``degree_cutoff``.
    """
    alg = algebra
    if alg.is_free:
        degree_cutoff = min(degree_cutoff, alg.cutoff)
    by_deg = {k: _basis_upto(alg, k + 1, degree_cutoff) for k in range(0, max_arity + 1)}
    basis = [b for k in range(max_arity + 1) for b in by_deg[k]]
    checks = []

    with timed() as t:
        bad = None
        count = 0
        for k in range(-1, max_arity + 1):
            for key in ([()] if k == -1 else by_deg[k]):
                count += 1
                dd = differential_raw(alg, _differential_key(alg, key))
                if dd:
                    bad = bad or {"element": _fmt(alg, key), "delta_delta": _fmt_raw(alg, dd)}
    checks.append(Check("delta_squared_zero", bad is None, {"checked": count, "counterexample": bad}, t.ms))

    with timed() as t:
        bad = None
        for key in basis:
            lhs = _differential_key(alg, key)
            rhs = _bracket_keys(alg, ((), ()), key)
            if lhs != rhs:
                bad = bad or {"element": _fmt(alg, key), "delta": _fmt_raw(alg, lhs), "bracket": _fmt_raw(alg, rhs)}
    checks.append(Check("inner_derivation", bad is None, {"checked": len(basis), "counterexample": bad}, t.ms))

    with timed() as t:
        bad = None
        count = 0
        for a, b in itertools.combinations_with_replacement(basis, 2):
            if alg.is_free and _key_degree(a) + _key_degree(b) > degree_cutoff:
                continue
            count += 1
            ab = _bracket_keys(alg, a, b)
            ba = _bracket_keys(alg, b, a)
            s = -_sign((len(a) - 1) * (len(b) - 1))
            tot = dict(ab)
            add_scaled(tot, ba, -s)
            if tot:
                bad = bad or {"pair": [_fmt(alg, a), _fmt(alg, b)]}
    checks.append(Check("graded_antisymmetry", bad is None, {"checked": count, "counterexample": bad}, t.ms))

    if jacobi:
        with timed() as t:
            bad = None
            count = 0
            for a, b, c in itertools.combinations_with_replacement(basis, 3):
                if alg.is_free and _key_degree(a) + _key_degree(b) + _key_degree(c) > degree_cutoff:
                    continue
                count += 1
                if jacobiator({a: 1}, {b: 1}, {c: 1}, alg):
                    bad = bad or {"triple": [_fmt(alg, a), _fmt(alg, b), _fmt(alg, c)]}
        checks.append(Check("graded_jacobi", bad is None, {"checked": count, "counterexample": bad}, t.ms))
    return checks


def _arity_of(x: Mapping) -> int:
    return len(_first(x)) if x else 0


def jacobiator(x: Mapping, y: Mapping, z: Mapping, alg: LieAlgebraSpec) -> dict[tuple, Fraction]:
    """``(-1)^(kx kz)[x,[y,z]] + (-1)^(ky kx)[y,[z,x]] + (-1)^(kz ky)[z,[x,y]]`` for homogeneous inputs."""
    kx, ky, kz = (_arity_of(v) - 1 for v in (x, y, z))
    out: dict[tuple, Fraction] = {}
    add_scaled(out, bracket_raw(alg, x, bracket_raw(alg, y, z)), _sign(kx * kz))
    add_scaled(out, bracket_raw(alg, y, bracket_raw(alg, z, x)), _sign(ky * kx))
    add_scaled(out, bracket_raw(alg, z, bracket_raw(alg, x, y)), _sign(kz * ky))
    return out


def _fmt(alg: LieAlgebraSpec, key: tuple) -> str:
    from .expr import format_tensor

    return format_tensor(TensorElement(alg, len(key), {key: 1}))


def _fmt_raw(alg: LieAlgebraSpec, d: Mapping) -> str:
    from .expr import format_tensor

    return format_tensor(TensorElement(alg, _arity_of(d), d))
