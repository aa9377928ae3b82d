"""Reduce uniform Andrasfai blow-ups and complete bipartite graphs; report |V(H)| and timing.

    python3 scripts/reduction_sweep.py [--weights 10 20 30]

A small --class-min is far below the default 8k/eps, so a positive profile entry no
longer guarantees 4k neighbours in the class; the report then fails "mu.support".
"""

import argparse
import time
from fractions import Fraction

from oddhom.andrasfai import AndrasfaiParams, andrasfai_graph
from oddhom.graph import blow_up, complete_bipartite, min_degree_ratio
from oddhom.reduction import ReductionError, ReductionParams, reduce


def run(name, g, k, m, class_min):
    ratio = min_degree_ratio(g)
    # largest eps with 2/eps integral that still fits under the degree ratio
    q = 1
    while Fraction(2, q) > ratio - Fraction(1, 2 * k - 1):
        q += 1
    eps = Fraction(2, q)
    t0 = time.perf_counter()
    try:
        res = reduce(g, ReductionParams(k, eps, m, class_min=class_min))
        status = "pass" if res.report.passed else "fail"
        h = res.reduced.H.n
        levels = res.report.params["levels"]
    except ReductionError as exc:
        status, h, levels = f"error at {exc.stage}", "-", "-"
    print(f"{name:14s} n={g.n:5d} eps={str(eps):6s} |V(H)|={h!s:4s} levels={levels} "
          f"{status} {time.perf_counter() - t0:.2f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weights", type=int, nargs="+", default=[10, 20, 30])
    ap.add_argument("--class-min", type=int, default=10)
    args = ap.parse_args()
    for t in (20, 50, 100):
        run(f"K{t},{t}", complete_bipartite(t, t), 3, 24, args.class_min)
    for k, r in [(3, 3), (3, 4), (4, 3)]:
        base = andrasfai_graph(AndrasfaiParams(k, r))
        for w in args.weights:
            g = blow_up(base, w)
            run(f"A{k},{r}x{w}", g, k, min(g.n, 10 * base.n), args.class_min)


if __name__ == "__main__":
    main()
