"""Run every verification scenario and print a one-line summary per scenario.

Usage::

    python scripts/run_theorem_suite.py [--trials 200] [--seed 20261017] [--json out.json]

Exit status is 1 if any scenario recorded a failure.
"""

import argparse
import json
import sys
import time

from enhorder.verify import SCENARIOS, run_scenario


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20261017)
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--json", default=None, help="also dump full reports here")
    args = ap.parse_args(argv)

    reports = []
    print(f"{'scenario':30s} {'passed':>6s} {'trials':>6s} {'rejected':>8s} {'failures':>8s} {'secs':>6s}")
    for theorem_id in SCENARIOS:
        t0 = time.perf_counter()
        r = run_scenario(theorem_id, trials=args.trials, seed=args.seed, n_range=(args.n_min, args.n_max))
        dt = time.perf_counter() - t0
        print(f"{theorem_id:30s} {str(r.passed):>6s} {r.trials:6d} {r.hypothesis_rejections:8d} "
              f"{len(r.failures):8d} {dt:6.1f}")
        reports.append(r)

    if args.json:
        with open(args.json, "w") as fh:
            json.dump([r.as_dict() for r in reports], fh, indent=1, default=float)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
