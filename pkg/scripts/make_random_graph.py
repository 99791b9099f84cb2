"""Write a seeded random connected weighted graph as JSON.

    python scripts/make_random_graph.py --seed 7 --n 40 --out data/random_seed7.json
"""
import argparse

from graphpde.generators import random_connected_graph
from graphpde.graph import serialize_graph


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--p", type=float, default=0.1, help="extra-edge probability")
    ap.add_argument("--lengths", action="store_true", help="random edge lengths instead of 1")
    ap.add_argument("--out", default="data/random_seed7.json")
    args = ap.parse_args()
    g = random_connected_graph(args.n, args.seed, p=args.p, lengths=args.lengths)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(serialize_graph(g, "json"))
    print(f"wrote {args.out}: {g.n} vertices, {len(g.edges)} edges")


if __name__ == "__main__":
    main()
