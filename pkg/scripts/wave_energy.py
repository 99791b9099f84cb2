"""Energy of the wave solution: conserved with zero boundary data, pumped by a driven boundary.

    python scripts/wave_energy.py --n 25 --seed 1
"""
import argparse
import math

import numpy as np

from graphpde.generators import random_connected_graph, random_interior
from graphpde.graph import boundary_of
from graphpde.heat import BoundarySignal
from graphpde.wave import energy, solve_wave


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=25)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--t-end", type=float, default=10.0)
    ap.add_argument("--samples", type=int, default=11)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    g = random_connected_graph(args.n, rng)
    part = boundary_of(g, random_interior(g, rng))
    f, g0 = rng.standard_normal(len(part.interior)), rng.standard_normal(len(part.interior))
    zero = BoundarySignal.zeros(part.boundary, args.t_end)
    driven = BoundarySignal.sampled(part.boundary, lambda t: np.full(len(part.boundary), math.sin(2 * t)),
                                    args.t_end, 400)

    e0 = energy(g, part, solve_wave(g, part, f, g0, zero, 0.0))
    print(f"|V|={g.n} |S|={len(part.interior)} E(0)={e0:.12g}")
    print(f"{'t':>8} {'E(t) - E(0), zero boundary':>28} {'E(t), driven boundary':>24}")
    for t in np.linspace(0, args.t_end, args.samples):
        free = energy(g, part, solve_wave(g, part, f, g0, zero, t)) - e0
        forced = energy(g, part, solve_wave(g, part, f, g0, driven, t))
        print(f"{t:8.3f} {free:28.3e} {forced:24.6g}")


if __name__ == "__main__":
    main()
