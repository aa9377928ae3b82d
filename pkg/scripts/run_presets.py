"""Run every bundled preset and write one JSON report per preset.

    python3 scripts/run_presets.py [--out results/]
"""

import argparse
import sys
import time
from pathlib import Path

from oddhom.presets import PRESETS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--only", choices=sorted(PRESETS), action="append")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name in args.only or sorted(PRESETS):
        t0 = time.perf_counter()
        rep = PRESETS[name]()
        (args.out / f"{name}.json").write_text(rep.to_json())
        counts = {}
        for c in rep.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        print(f"{name:16s} exit={rep.exit_code()} {counts} {time.perf_counter() - t0:.2f}s")
        worst = max(worst, rep.exit_code())
    return worst


if __name__ == "__main__":
    sys.exit(main())
