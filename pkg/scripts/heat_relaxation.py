"""Heat flow on a random graph relaxing to the harmonic extension of constant boundary data.

    python scripts/heat_relaxation.py --n 30 --seed 3
"""
import argparse

import numpy as np

from graphpde.elliptic import DirichletProblem, solve_laplace
from graphpde.generators import random_connected_graph, random_interior
from graphpde.graph import boundary_of
from graphpde.heat import BoundarySignal, solve_heat
from graphpde.modes import modal_basis


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--samples", type=int, default=12)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    g = random_connected_graph(args.n, rng)
    part = boundary_of(g, random_interior(g, rng))
    sigma = rng.uniform(-1, 1, len(part.boundary))
    f = rng.uniform(-1, 1, len(part.interior))
    lam1 = modal_basis(g, part).eigenvalues[0]
    T = 40.0 / lam1
    target = solve_laplace(DirichletProblem(g, part, sigma)).values
    sig = BoundarySignal.constant(part.boundary, sigma, T)

    print(f"|V|={g.n} |S|={len(part.interior)} lambda_1={lam1:.6g} T=40/lambda_1={T:.6g}")
    print(f"{'t':>12} {'max|u - harmonic|':>20} {'exp(-lambda_1 t)':>18}")
    for t in np.linspace(0, T, args.samples):
        err = np.max(np.abs(solve_heat(g, part, f, sig, t).values - target))
        print(f"{t:12.5g} {err:20.6e} {np.exp(-lam1 * t):18.6e}")


if __name__ == "__main__":
    main()
