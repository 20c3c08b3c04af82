"""Stability statistic over an epsilon grid for several families, written as CSV.

    python3 scripts/stability_profile.py --out results/ [--reps 20]
"""

import argparse
import os

from stabilitylab.config import parse_config
from stabilitylab.experiments import emit_results, run_experiment

SETUPS = [
    ("SK", "single_block", "n = 8, 12, 16"),
    ("SK", "row_block", "n = 8, 12, 16"),
    ("Assignment", "single_block", "n = 6, 10, 20"),
    ("TSP", "single_block", "n = 8, 10, 12"),
    ("MST", "single_block", "n = 10, 20, 40"),
    ("EA", "single_block", "shape = 3x3, 4x4, 4x5"),
    ("Wigner", "row_block", "n = 10, 20, 40"),
    ("BRW", "single_block", "n = 8, 10, 12"),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    for fam, variant, grid in SETUPS:
        spec = parse_config(f"[stability]\nfamily = {fam}\nvariant = {variant}\n{grid}\n"
                            f"epsilon = 0.1, 0.25, 0.5\nreplications = {args.reps}\nseed = {args.seed}\n")
        rec = run_experiment(spec)
        path = emit_results(rec, "csv", os.path.join(args.out, variant))
        print(path, len(rec.rows), "rows")


if __name__ == "__main__":
    main()
