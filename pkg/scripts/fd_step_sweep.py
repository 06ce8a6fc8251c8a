"""Pullback-identity residual against finite-difference step.

Shows the two regimes: truncation error falling like h^4 for large steps
(central differences plus one Richardson level) and roundoff growing like
1/h for small ones.  Prints a table and optionally writes CSV.

    python3 scripts/fd_step_sweep.py --l 2 --samples 50 --csv results/fd_sweep.csv
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from frobrecip.errors import DerivativeFailure
from frobrecip.frobenius import check_frobenius_pullback, spherical_harmonics_instance
from frobrecip.report import Sampler


def main() -> int:
    ap = argparse.ArgumentParser(description="fd-step sweep of the pullback identity")
    ap.add_argument("--l", type=int, default=2)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    inst = spherical_harmonics_instance(args.l)
    steps = np.geomspace(8e-3, 1e-6, 14)
    rows, prev = [], None
    print(f"{'fd_step':>10} {'max':>11} {'mean':>11} {'ratio':>7}")
    for h in steps:
        try:
            rep = check_frobenius_pullback(inst, Sampler(args.seed, args.samples), fd_step=float(h))
        except DerivativeFailure:
            print(f"{h:10.2e} {'derivative check failed':>31}")
            continue
        ratio = prev / rep.max_residual if prev else float("nan")
        prev = rep.max_residual
        rows.append((float(h), rep.max_residual, rep.mean_residual))
        print(f"{h:10.2e} {rep.max_residual:11.3e} {rep.mean_residual:11.3e} {ratio:7.2f}")
    if args.csv:
        Path(args.csv).parent.mkdir(parents=True, exist_ok=True)
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["fd_step", "max_residual", "mean_residual"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
