"""Pilot run for the moment-ratio threshold at n = 64.

Samples M_64 with an independent seed, reports r_k = E[M^k] / (k! E[M]^k)
for k <= 6 and writes results/pilot_moments.json. The acceptance threshold
(5) sits well above the pilot maximum.
"""

import argparse
import json
from pathlib import Path

from lerwlab import estimators as E

ap = argparse.ArgumentParser()
ap.add_argument("--n", type=int, default=64)
ap.add_argument("--trials", type=int, default=10**5)
ap.add_argument("--seed", type=int, default=777)
ap.add_argument("--threshold", type=float, default=5)
ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "results" / "pilot_moments.json"))
args = ap.parse_args()

x = E.sample_Mn(args.n, args.trials, args.seed)
rows = E.moments(x, 6)
worst = max(r["ratio"] ** (1 / r["k"]) for r in rows)
report = {
    "n": args.n,
    "trials": args.trials,
    "seed": args.seed,
    "mean": float(x.mean()),
    "ratios": [{"k": r["k"], "ratio": r["ratio"], "ratio_se": r["ratio_se"]} for r in rows],
    "max_root_ratio": worst,
    "threshold": int(args.threshold) if float(args.threshold).is_integer() else args.threshold,
}
Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
for r in rows:
    print(f"k={r['k']}  r_k={r['ratio']:.4f} +- {r['ratio_se']:.4f}")
print(f"max r_k^(1/k) = {worst:.4f}; threshold {args.threshold}")
