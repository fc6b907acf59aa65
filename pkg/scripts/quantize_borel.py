"""Twist series for r = e1^e2 on the Borel algebra, order by order.

    python3 scripts/quantize_borel.py --order 4
"""

import argparse
import time

from drinfeld.envelope import LieAlgebraSpec
from drinfeld.exterior import lie_basis
from drinfeld.expr import format_tensor, parse_poly
from drinfeld.twist import MAX_ORDER, cocycle_residuals, mc_residuals, solve_structure_maps, twist_mc


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=4, choices=range(1, MAX_ORDER + 1))
    ap.add_argument("--r", default="e1^e2")
    args = ap.parse_args()

    alg = LieAlgebraSpec.borel()
    start = time.perf_counter()
    maps = solve_structure_maps(alg, args.order)
    rho = twist_mc(parse_poly(lie_basis(alg), args.r), maps, args.order)
    mc, cyb = mc_residuals(rho), cocycle_residuals(rho)
    for m in range(1, args.order + 1):
        status = "ok" if not mc[m - 1] and not cyb[m - 1] else "RESIDUAL"
        print(f"hbar^{m} [{status}]  {format_tensor(rho[m])}")
    print(f"solved in {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
