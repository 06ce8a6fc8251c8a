"""Run every scenario with default parameters and write a JSON report.

    python3 scripts/run_all.py --seed 42 --out results/all.json
"""

import argparse
import sys
import time
from pathlib import Path

from frobrecip.cli import build_document, dump_json, format_text
from frobrecip.suites import SCENARIOS, SuiteConfig, run_scenario


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--out", type=Path, default=Path("results/all.json"))
    args = ap.parse_args()

    cfg = SuiteConfig(seed=args.seed, samples=args.samples)
    results = []
    for sid in SCENARIOS:
        t0 = time.perf_counter()
        res = run_scenario(sid, cfg)
        print(f"{sid:<26} {'ok' if res.matched else 'MISMATCH':<9} {time.perf_counter() - t0:6.1f} s",
              file=sys.stderr)
        results.append(res)
    doc = build_document(cfg, results)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(dump_json(doc))
    print(format_text(doc), end="")
    return 0 if doc["overall"] == "PASS" else 1


if __name__ == "__main__":
    sys.exit(main())
