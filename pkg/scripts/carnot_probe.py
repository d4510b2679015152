"""Random search for cycles that beat the Carnot efficiency.

Samples configurations uniformly (nu in [0, 1], T_h/T_c in [1, ratio_max])
and reports the largest eta_QCE / eta_CCE seen among positive-work cycles,
plus any violation of eta_QCE <= eta_CCE + 1e-12.
"""

import argparse
import random

from anyon_carnot.cycle import CycleConfig, run_cycle


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratio-max", type=float, default=20.0)
    args = p.parse_args(argv)

    rng = random.Random(args.seed)
    positive, violations = 0, []
    best_ratio, best_cfg = 0.0, None
    for _ in range(args.samples):
        t_c = rng.uniform(0.05, 5.0)
        cfg = CycleConfig(t_c * rng.uniform(1.0001, args.ratio_max), t_c, *(rng.random() for _ in range(4)))
        r = run_cycle(cfg)
        if not (r.positive_work and r.valid):
            continue
        positive += 1
        ratio = r.eta_qce / r.eta_cce
        if ratio > best_ratio:
            best_ratio, best_cfg = ratio, cfg
        if not r.eta_below_carnot:
            violations.append(cfg)

    print(f"samples={args.samples} positive_work={positive} violations={len(violations)}")
    print(f"max eta/eta_Carnot={best_ratio:.6f} at {best_cfg}")
    for cfg in violations[:10]:
        print("violation:", cfg)
    return 1 if violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
