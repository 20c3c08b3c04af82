"""Compare calibration statistics with their closed-form limits.

    python3 scripts/calibrate_anchors.py [--quick]
"""

import argparse
import json
import re

from stabilitylab.config import parse_config
from stabilitylab.experiments import run_experiment, to_json

RUNS = {
    "Assignment": "n = 10\nlaw = exponential\nreplications = 5000",
    "Wigner": "n = 300\nlaw = gaussian\nreplications = 20",
    "Wishart": "n = 200\nalpha = 1\nlaw = gaussian\nreplications = 20",
    "BRW": "n = 18\nprogeny = 0, 0, 1\nlaw = gaussian\nreplications = 30",
    "MST": "n = 8, 64, 512\nreplications = 30",
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="a tenth of the replications")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    for fam, body in RUNS.items():
        if args.quick:
            body = re.sub(r"replications = (\d+)", lambda m: f"replications = {max(int(m[1]) // 10, 2)}", body)
        spec = parse_config(f"[calibrate]\nfamily = {fam}\n{body}\nseed = {args.seed}\n")
        doc = json.loads(to_json(run_experiment(spec)))
        for cell in doc["summary"]:
            anchor = doc.get("anchor", {}).get(str(cell["n"]))
            cv = cell["se"] * cell["count"] ** 0.5 / abs(cell["mean"]) if cell["mean"] else float("nan")
            print(f"{fam:10s} n={cell['n']:<4d} {cell['statistic_name']:20s} mean {cell['mean']:+.4f} "
                  f"median {cell['median']:+.4f} se {cell['se']:.4f} cv {cv:.3f} anchor {anchor}")


if __name__ == "__main__":
    main()
