"""Work and efficiency over a (nu_B, nu_C) grid with the other parameters fixed.

Writes one CSV row per grid point and prints the max-work and
max-efficiency points.  The grid is illustrative.

    python scripts/efficiency_landscape.py --t-h 2 --t-c 1 --count 21 -o landscape.csv
"""

import argparse
import contextlib
import sys

from anyon_carnot.records import csv_header, csv_row
from anyon_carnot.sweep import Objective, Range, SweepSpec, run_sweep, select_best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--t-h", type=float, default=2.0)
    p.add_argument("--t-c", type=float, default=1.0)
    p.add_argument("--nu-a", type=float, default=0.0)
    p.add_argument("--nu-d", type=float, default=0.0)
    p.add_argument("--count", type=int, default=21)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("-o", "--output")
    args = p.parse_args(argv)

    spec = SweepSpec(
        ranges={"nu_b": Range(0.0, 1.0, args.count), "nu_c": Range(0.0, 1.0, args.count)},
        fixed={"t_h": args.t_h, "t_c": args.t_c, "nu_a": args.nu_a, "nu_d": args.nu_d},
    )
    result = run_sweep(spec, workers=args.workers)
    with open(args.output, "w") if args.output else contextlib.nullcontext(sys.stdout) as fh:
        fh.write(csv_header() + "\n")
        for row in result.rows:
            fh.write(csv_row(row) + "\n")

    positive = sum(r.work > 0 for r in result.rows)
    print(f"{len(result.rows)} cycles, {positive} with positive work", file=sys.stderr)
    for obj in (Objective.MAX_WORK, Objective.MAX_EFFICIENCY):
        best = select_best(result.rows, obj)
        if best is None:
            print(f"{obj.value}: no admissible point", file=sys.stderr)
            continue
        c = best.config
        print(
            f"{obj.value}: nu_b={c.nu_b:.3f} nu_c={c.nu_c:.3f} work={best.work:.6g} "
            f"eta={best.eta_qce:.6g} (Carnot {best.eta_cce:.6g})",
            file=sys.stderr,
        )


if __name__ == "__main__":
    main()
