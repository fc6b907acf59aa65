"""Order-by-order construction of an L-infinity quasi-isomorphism ``E(g) -> D``.

Starting from ``F1 = h`` the structure maps are built one arity at a time.
With ``Phi_n`` the quadratic and insertion part of the morphism equation,

    Phi_n = sum_{m=2}^{n-1} sum_{Sh(m,n-m)} e F_{n-m+1}(QH_m(x_I), x_J)
            - 1/2 sum_{k=1}^{n-1} sum_{Sh(k,n-k)} e Q2'(F_k(x_I), F_{n-k}(x_J)),

the new bracket is ``QH_n = -f(Phi_n)`` and ``F_n`` solves
``delta F_n = Phi_n + h(QH_n)``, which is solvable because ``f`` kills the
right-hand side.  ``QH_3`` is the first obstruction: it is always closed
under the Chevalley-Eilenberg differential, and formality at this order
amounts to it being exact.

All maps are stored as graded-symmetric cochains in the shifted grading, so
``F2`` here is ``(-1)^arity(x1)`` times the map solving
``delta F2 = h([x1, x2]) - [h x1, h x2]_G``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .cochain import Cochain, arg_tuples, canonical_args, ce_differential, is_coboundary, q2_poly, unshuffle_sign
from .complex import _bracket_keys
from .envelope import AlgebraError, LieAlgebraSpec, TensorElement
from .exterior import lie_basis, poly_weight
from .hkr import DeltaSolver, _h_key, f_raw, h_raw
from .linalg import add_scaled, add_term
from .report import Check, timed

__all__ = [
    "StructureMapTable",
    "NotExactError",
    "build_structure_maps",
    "solve_f2",
    "obstruction_cocycle",
    "run_obstruction",
]


class NotExactError(AlgebraError):
    """A right-hand side that ``delta`` cannot reach."""


def q2_tensor(x: Mapping, y: Mapping, alg: LieAlgebraSpec) -> dict[tuple, Fraction]:
    """Shifted bracket ``(-1)^arity(x) [x, y]_G`` on raw tensors (scalar line central)."""
    out: dict[tuple, Fraction] = {}
    for k1, c1 in x.items():
        s = -c1 if len(k1) % 2 else c1
        for k2, c2 in y.items():
            add_scaled(out, _bracket_keys(alg, k1, k2), s * c2)
    return out


class StructureMapTable:
    """``F_1 .. F_n`` and ``QH_2 .. QH_n`` on canonical argument tuples.

    ``F[n]`` are ``D``-valued degree-0 cochains, ``QH[m]`` for ``m >= 3`` are
    ``E(g)``-valued degree-1 cochains; ``QH_2`` is the shifted bracket itself.
    ``F_1 = h`` is evaluated directly rather than tabulated.
    """

    def __init__(self, algebra: LieAlgebraSpec, cap: int | None, solver: DeltaSolver | None = None):
        self.algebra = algebra
        self.basis = lie_basis(algebra)
        self.cap = cap
        self.solver = solver or DeltaSolver(algebra)
        self.F: dict[int, Cochain] = {}
        self.QH: dict[int, Cochain] = {}
        self.order = 1

    # evaluation on basis tuples -------------------------------------------------

    def f_value(self, n: int, args: tuple) -> dict:
        if n == 1:
            return _h_key(self.basis, args[0])
        return self.F[n].value(args)

    def qh_value(self, m: int, args: tuple) -> dict:
        if m == 2:
            return q2_poly(self.basis, args[0], args[1])
        return self.QH[m].value(args)

    def evaluate(self, n: int, args: list[Mapping]) -> dict:
        """``F_n`` on arbitrary polyvector arguments."""
        out: dict = {}
        for combo in itertools.product(*(a.items() for a in args)):
            c = 1
            for _, x in combo:
                c *= x
            add_scaled(out, self.f_value(n, tuple(k for k, _ in combo)), c)
        return out

    # one order ------------------------------------------------------------------

    def phi(self, args: tuple) -> dict:
        """``Phi_n`` at a canonical tuple of ``n`` wedge monomials."""
        n = len(args)
        alg = self.algebra
        out: dict = {}
        for m in range(2, n):
            for picked in itertools.combinations(range(n), m):
                rest = tuple(args[i] for i in range(n) if i not in picked)
                eps = unshuffle_sign(args, picked)
                q = self.qh_value(m, tuple(args[i] for i in picked))
                for qk, qc in q.items():
                    add_scaled(out, self.f_value(n - m + 1, (qk,) + rest), eps * qc)
        half = Fraction(-1, 2)
        for k in range(1, n):
            for picked in itertools.combinations(range(n), k):
                rest = tuple(args[i] for i in range(n) if i not in picked)
                a = self.f_value(k, tuple(args[i] for i in picked))
                if not a:
                    continue
                b = self.f_value(n - k, rest)
                if not b:
                    continue
                add_scaled(out, q2_tensor(a, b, alg), half * unshuffle_sign(args, picked))
        return out

    def tuples(self, n: int) -> list[tuple]:
        return arg_tuples(self.basis, n, self.cap)

    def extend(self, allow_correction: bool = True) -> Cochain:
        """Solve the next order; returns the new ``QH_n`` (zero when unobstructed).

        With ``allow_correction=False`` a nonzero ``f(Phi_n)`` raises
        :class:`NotExactError` naming the order and the offending tuple.
        """
        n = self.order + 1
        alg = self.algebra
        fvals: dict[tuple, dict] = {}
        qvals: dict[tuple, dict] = {}
        for t in self.tuples(n):
            rhs = self.phi(t)
            qh = {k: -c for k, c in f_raw(alg, rhs).items()} if n >= 3 else {}
            if n == 2:
                # QH_2 is the bracket of E(g); add h(QH_2) to the right-hand side
                add_scaled(rhs, h_raw(self.basis, q2_poly(self.basis, t[0], t[1])))
            elif qh:
                if not allow_correction:
                    raise NotExactError(
                        f"order {n} is obstructed: f(Phi_{n}) is nonzero at {_fmt_args(self.basis, t)}"
                    )
                qvals[t] = qh
                add_scaled(rhs, h_raw(self.basis, qh))
            arity = sum(len(a) for a in t) - 2 * n + 2
            if not rhs:
                continue
            sol = self.solver.solve(rhs, arity) if arity >= 0 else None
            if sol is None:
                raise NotExactError(f"RHS not exact at order {n}, arguments {_fmt_args(self.basis, t)}")
            if sol:
                fvals[t] = sol
        self.F[n] = Cochain(self.basis, n, 0, fvals, self.cap)
        qh_cochain = Cochain(self.basis, n, 1, qvals, self.cap)
        if n >= 3:
            self.QH[n] = qh_cochain
        self.order = n
        return qh_cochain

    def gauge(self, n: int, psi: Cochain) -> None:
        """Replace ``F_n`` by ``F_n + h . psi`` (``psi`` an ``E(g)``-valued degree-0 cochain)."""
        vals = {t: dict(v) for t, v in self.F[n].values.items()}
        for t, v in psi.values.items():
            add_scaled(vals.setdefault(t, {}), h_raw(self.basis, v))
        self.F[n] = Cochain(self.basis, n, 0, {t: v for t, v in vals.items() if v}, self.cap)


def _fmt_args(basis, args: tuple) -> str:
    from .expr import format_poly
    from .exterior import PolyVector

    return "(" + ", ".join(format_poly(PolyVector(basis, {a: 1})) for a in args) + ")"


def _default_cap(alg: LieAlgebraSpec, cutoff: int | None) -> int | None:
    if not alg.is_free:
        return None
    return alg.cutoff if cutoff is None else min(cutoff, alg.cutoff)


def build_structure_maps(algebra: LieAlgebraSpec, order: int, cutoff: int | None = None, allow_correction: bool = True) -> StructureMapTable:
    table = StructureMapTable(algebra, _default_cap(algebra, cutoff))
    while table.order < order:
        table.extend(allow_correction)
    return table


def solve_f2(algebra: LieAlgebraSpec, cutoff: int | None = None) -> dict[tuple, TensorElement]:
    """``F2(x1, x2)`` with ``delta F2 = h([x1, x2]) - [h x1, h x2]_G`` on every ordered basis pair.

    Raises :class:`NotExactError` ("RHS not exact") if some system is inconsistent.
    """
    table = build_structure_maps(algebra, 2, cutoff)
    out = {}
    for t in table.tuples(2):
        for pair in {t, (t[1], t[0])}:
            v = table.F[2].value(pair)
            sign = -1 if len(pair[0]) % 2 else 1
            arity = len(pair[0]) + len(pair[1]) - 2
            out[pair] = TensorElement(algebra, arity, {k: sign * c for k, c in v.items()})
    return out


def obstruction_cocycle(algebra: LieAlgebraSpec, cutoff: int | None = None) -> tuple[Cochain, StructureMapTable]:
    """The ternary cochain ``Q3 = f(zeta_3)`` and the maps it was built from."""
    table = build_structure_maps(algebra, 2, cutoff)
    q3 = table.extend(allow_correction=True)
    return q3, table


def _format_cochain(c: Cochain) -> dict[str, str]:
    from .expr import format_poly
    from .exterior import PolyVector

    out = {}
    for t in sorted(c.values, key=lambda t: [(len(k), k) for k in t]):
        v = c.values[t]
        if v:
            out[_fmt_args(c.basis, t)] = format_poly(PolyVector(c.basis, v))
    return out


def run_obstruction(algebra: LieAlgebraSpec, cutoff: int | None = None) -> tuple[list[Check], dict]:
    """Build ``Q3``, check it is closed, solve for a witness ``psi`` and re-apply ``d``."""
    checks = []
    witnesses: dict = {}
    with timed() as t:
        q3, table = obstruction_cocycle(algebra, cutoff)
    checks.append(
        Check(
            "f2_solved",
            True,
            {"pairs": len(table.tuples(2)), "nonzero": sum(1 for v in table.F[2].values.values() if v)},
            t.ms,
        )
    )
    with timed() as t:
        dq = ce_differential(q3)
    closed = not dq
    checks.append(
        Check(
            "q3_closed",
            closed,
            {"triples": len(table.tuples(3)), "q3_nonzero": len(q3.values), "counterexample": next(iter(_format_cochain(dq).items()), None)},
            t.ms,
        )
    )
    psi = None
    with timed() as t:
        if closed:
            psi = is_coboundary(q3)
    checks.append(Check("q3_exact", psi is not None, {"reading": "shifted graded-symmetric, d = [Q2, -]"}, t.ms))
    with timed() as t:
        ok = psi is not None and ce_differential(psi, q3.values.keys() or None).values == q3.values
        if psi is not None:
            ok = ok and ce_differential(psi).values == q3.values
    checks.append(Check("witness_reproduces_q3", ok, {}, t.ms))
    witnesses["q3"] = _format_cochain(q3)
    if psi is not None:
        witnesses["psi"] = _format_cochain(psi)
    return checks, witnesses
