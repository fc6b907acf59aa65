"""Twist quantization of a triangular r-matrix, order by order in ``hbar``.

``rho = sum_m hbar^m F_m(r, .., r) / m!`` is a Maurer-Cartan element of ``D``
once ``r`` is triangular, and ``T = I(x)I + rho`` then satisfies the cocycle
equation ``T_{12,3} T_{12} = T_{1,23} T_{23}``.  For ``rho`` in ``U(x)U`` the
cocycle residual and ``delta rho + 1/2 [rho, rho]_G`` are the same element of
``U^(x)3``, but the two are computed independently here as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .complex import bracket_raw, differential_raw
from .envelope import AlgebraError, LieAlgebraSpec, TensorElement, delta_power_monomial
from .exterior import PolyVector, is_triangular
from .linalg import HPoly, add_scaled, add_term
from .obstruction import StructureMapTable, build_structure_maps
from .report import Check, timed

__all__ = ["MAX_ORDER", "TwistSeries", "solve_structure_maps", "twist_mc", "mc_residuals", "build_T_and_check"]

MAX_ORDER = 6


@dataclass
class TwistSeries:
    """``rho_1 .. rho_N``, each of arity 2 (an element of ``U (x) U``)."""

    algebra: LieAlgebraSpec
    order_cap: int
    coeffs: list[TensorElement]

    def __post_init__(self):
        if len(self.coeffs) != self.order_cap:
            raise AlgebraError("a twist series needs one coefficient per order")
        if any(c.arity != 2 for c in self.coeffs):
            raise AlgebraError("twist coefficients must lie in U (x) U")

    def __getitem__(self, m: int) -> TensorElement:
        """Coefficient of ``hbar^m`` for ``1 <= m <= order_cap``."""
        return self.coeffs[m - 1]


def solve_structure_maps(algebra: LieAlgebraSpec, order: int = 4, max_order: int = MAX_ORDER) -> StructureMapTable:
    """``F_1 .. F_order`` with no bracket corrections beyond ``QH_2``.

    Raises :class:`~drinfeld.obstruction.NotExactError` naming the order and
    argument tuple if some ``f(Phi_n)`` is nonzero.
    """
    if not 1 <= order <= max_order:
        raise AlgebraError(f"order must lie in 1..{max_order}")
    return build_structure_maps(algebra, order, allow_correction=False)


def twist_mc(r: PolyVector, maps: StructureMapTable, order: int) -> TwistSeries:
    if not is_triangular(r):
        raise AlgebraError("r is not triangular")
    if order > maps.order:
        raise AlgebraError(f"structure maps are solved only up to order {maps.order}")
    alg = maps.algebra
    coeffs = []
    for m in range(1, order + 1):
        val = maps.evaluate(m, [r.terms] * m)
        w = Fraction(1, math.factorial(m))
        coeffs.append(TensorElement(alg, 2, {k: w * c for k, c in val.items()}))
    return TwistSeries(alg, order, coeffs)


def mc_residuals(rho: TwistSeries) -> list[dict]:
    """``delta rho_m + 1/2 sum_{i+j=m} [rho_i, rho_j]_G`` for ``m = 1 .. N``."""
    alg = rho.algebra
    out = []
    for m in range(1, rho.order_cap + 1):
        res = differential_raw(alg, rho[m].terms)
        for i in range(1, m):
            add_scaled(res, bracket_raw(alg, rho[i].terms, rho[m - i].terms), Fraction(1, 2))
        out.append(res)
    return out


def _coproduct_slot(alg: LieAlgebraSpec, t: TensorElement, slot: int) -> TensorElement:
    out: dict = {}
    for key, c in t.terms.items():
        for parts, x in delta_power_monomial(key[slot], 1).items():
            add_term(out, key[:slot] + parts + key[slot + 1 :], c * x)
    return TensorElement(alg, t.arity + 1, out)


def _pad(alg: LieAlgebraSpec, t: TensorElement, left: bool) -> TensorElement:
    if left:
        return TensorElement(alg, t.arity + 1, {((),) + k: c for k, c in t.terms.items()})
    return TensorElement(alg, t.arity + 1, {k + ((),): c for k, c in t.terms.items()})


def cocycle_residuals(rho: TwistSeries) -> list[dict]:
    """``T_{12,3} T_{12} - T_{1,23} T_{23}`` coefficientwise for ``hbar^1 .. hbar^N``."""
    alg = rho.algebra
    n = rho.order_cap
    zero3 = TensorElement(alg, 3)
    T = HPoly([TensorElement.unit(alg, 2)] + rho.coeffs, n, TensorElement(alg, 2))
    t12_3 = T.map(lambda x: _coproduct_slot(alg, x, 0), zero3)
    t12 = T.map(lambda x: _pad(alg, x, left=False), zero3)
    t1_23 = T.map(lambda x: _coproduct_slot(alg, x, 1), zero3)
    t23 = T.map(lambda x: _pad(alg, x, left=True), zero3)
    lhs = t12_3.mul(t12, lambda a, b: a * b)
    rhs = t1_23.mul(t23, lambda a, b: a * b)
    diff = lhs - rhs
    return [diff[m].terms for m in range(1, n + 1)]


def _fmt(alg: LieAlgebraSpec, arity: int, d: dict) -> str:
    from .expr import format_tensor

    return format_tensor(TensorElement(alg, arity, d))


def build_T_and_check(rho: TwistSeries) -> tuple[list[Check], dict]:
    alg = rho.algebra
    checks = []
    with timed() as t:
        mc = mc_residuals(rho)
    mc_ok = not any(mc)
    checks.append(Check("maurer_cartan", mc_ok, {"residuals": [_fmt(alg, 3, r) for r in mc]}, t.ms))
    with timed() as t:
        cyb = cocycle_residuals(rho)
    cyb_ok = not any(cyb)
    checks.append(Check("twist_cocycle", cyb_ok, {"residuals": [_fmt(alg, 3, r) for r in cyb]}, t.ms))
    agree = [bool(a) for a in mc] == [bool(b) for b in cyb]
    checks.append(Check("residuals_agree", agree, {"identical": mc == cyb}, None))
    witnesses = {"T": ["1 (x) 1"] + [_fmt(alg, 2, rho[m].terms) for m in range(1, rho.order_cap + 1)]}
    return checks, witnesses
