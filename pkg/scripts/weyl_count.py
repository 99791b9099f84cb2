"""Counting function of the unit-length metric spectrum against the linear law |E| W / pi.

    python scripts/weyl_count.py --graph data/random_seed7.json --windows 10
"""
import argparse
import math

from graphpde.graph import load_graph
from graphpde.metric import unit_length_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", default="data/random_seed7.json")
    ap.add_argument("--windows", type=int, default=10)
    ap.add_argument("--points", type=int, default=4, help="samples per 2 pi window")
    args = ap.parse_args()

    g = load_graph(args.graph)
    spec = unit_length_spectrum(g, args.windows)
    E, n = len(g.edges), g.n
    print(f"|V|={n} |E|={E} bound 2|E|+|V|={2 * E + n}")
    for note in spec.diagnostics:
        print("diagnostic:", note)
    print(f"{'W':>10} {'N(W)':>8} {'|E| W / pi':>12} {'deviation':>10}")
    steps = args.windows * args.points
    for i in range(1, steps + 1):
        W = 2 * math.pi * args.windows * i / steps
        N = spec.count_up_to(W)
        print(f"{W:10.4f} {N:8d} {E * W / math.pi:12.2f} {N - E * W / math.pi:10.2f}")


if __name__ == "__main__":
    main()
