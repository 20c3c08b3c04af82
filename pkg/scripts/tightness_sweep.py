"""Growth of near-optimal-set packing numbers across size grids, for c in {0.5, 1, 2}.

    python3 scripts/tightness_sweep.py [--reps 30] [--epsilon 0.25]
"""

import argparse

from stabilitylab.config import parse_config
from stabilitylab.experiments import run_experiment

GRIDS = {
    "SK": "n = 12, 16, 20",
    "Assignment": "n = 5, 6, 7, 8",
    "TSP": "n = 7, 8, 9, 10",
    "EA": "shape = 2x4, 3x4, 4x4, 4x5",
    "BRW": "n = 8, 10, 12",
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=30)
    ap.add_argument("--epsilon", type=float, default=0.25)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    print("family      c     q90 per n                 max growth")
    for fam, grid in GRIDS.items():
        spec = parse_config(f"[tightness]\nfamily = {fam}\n{grid}\nepsilon = {args.epsilon}\n"
                            f"c = 0.5, 1, 2\nreplications = {args.reps}\nseed = {args.seed}\n")
        for g in run_experiment(spec).growth():
            print(f"{fam:10s} {g['c']:4.1f}   {str(g['quantiles']):25s} {g['max_growth']:.2f}")


if __name__ == "__main__":
    main()
