"""Tabulate the exact room above 1/(2k-1) for the even and odd tetrahedron blow-ups.

For odd k the room is positive only from some f on; the table shows where.

    python3 scripts/eps_table.py [--kmax 11] [--fmax 8]
"""

import argparse

from oddhom.constructions import expected_min_degree, expected_order, max_eps, parity_of
from oddhom.presets import smallest_f_with_room


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=11)
    ap.add_argument("--fmax", type=int, default=8)
    args = ap.parse_args()
    print(f"{'k':>3} {'f':>3} {'parity':>6} {'n':>6} {'delta':>6} {'max eps':>12}")
    for k in range(4, args.kmax + 1):
        parity = parity_of(k)
        for f in range(1, args.fmax + 1):
            n, d = expected_order(parity, k, f), expected_min_degree(parity, k, f)
            print(f"{k:>3} {f:>3} {parity:>6} {n:>6} {d:>6} {str(max_eps(parity, k, f)):>12}")
        print(f"    k={k}: smallest f with positive room = {smallest_f_with_room(k)}")


if __name__ == "__main__":
    main()
