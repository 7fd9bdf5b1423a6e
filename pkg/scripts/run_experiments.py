"""Run the full experiment set through the CLI harness.

Each experiment gets its own output directory under results/ with
results.csv, summary.json and (for curves) plot.svg. Pass --quick for a
reduced-trial smoke run.
"""

import argparse
import sys
from pathlib import Path

from lerwlab.cli import ExperimentManifest, run

ROOT = Path(__file__).resolve().parents[1] / "results"

EXPERIMENTS = [
    ("oracle-b1", "oracle-check", {"n": 1}, 10**6),
    ("oracle-b2", "oracle-check", {"n": 2}, 10**6),
    ("oracle-b2-reverse", "oracle-check", {"n": 2, "reverse": True}, 10**6),
    ("wilson-b2", "wilson", {"n": 2}, 10**5),
    ("es-sweep", "es", {"n": [1, 2, 4, 8, 16, 32, 64, 128]}, 10**5),
    ("es-mn-exponent", "es-mn", {"n": 32, "k": [2, 4, 8]}, 10**5),
    ("hat-es", "hat-es", {"n": [16, 32, 64]}, 10**5),
    ("moments-64", "moments", {"n": 64, "k": 6}, 10**5),
    ("tails-64", "tails", {"n": 64}, 10**6),
    ("growth", "growth", {"n": [64, 128, 256, 512]}, 10**4),
    ("separation", "separation", {"n": [16, 32, 64]}, 5 * 10**4),
    ("mu-convergence", "mu-convergence", {"m": 1, "n": [4, 8, 16]}, 10**5),
    ("mk", "mk", {"m": 8, "n": 16, "N": 256}, 2000),
    ("green-checks", "green-checks", {}, 1),
]

ap = argparse.ArgumentParser()
ap.add_argument("--seed", type=int, default=1)
ap.add_argument("--workers", type=int)
ap.add_argument("--quick", action="store_true")
ap.add_argument("--only", nargs="*")
args = ap.parse_args()

failed = []
for label, kind, params, trials in EXPERIMENTS:
    if args.only and label not in args.only:
        continue
    if args.quick:
        trials = max(1, trials // 100)
    man = ExperimentManifest(kind, params, trials, args.seed, args.workers, str(ROOT / label))
    status = run(man)
    print(f"{'ok  ' if status == 0 else 'FAIL'} {label}")
    if status:
        failed.append(label)
sys.exit(1 if failed else 0)
