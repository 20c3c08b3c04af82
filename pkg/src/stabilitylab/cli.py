"""Command line entry point: ``stabilitylab <kind> --config PATH``."""

from __future__ import annotations

import argparse
import os
import sys

from .config import KINDS, load_config, with_overrides
from .errors import ParseError, StabilityLabError, ValidationError
from .experiments import emit_results, run_experiment

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabilitylab", description="Perturbation-stability experiments.")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("--config", required=True, help="flat key = value config file")
    ap.add_argument("--seed", type=int, help="master seed (overrides STABILITYLAB_SEED and the config)")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for replications")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--format", choices=("csv", "json"))
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK
    try:
        spec = load_config(args.config, args.kind)
        seed = args.seed
        if seed is None and os.environ.get("STABILITYLAB_SEED"):
            seed = int(os.environ["STABILITYLAB_SEED"])
        spec = with_overrides(spec, seed=seed, out=args.out, format=args.format)
        if args.jobs < 1:
            raise ValidationError("--jobs must be >= 1")
    except (ParseError, ValidationError, ValueError) as e:
        print(f"stabilitylab: invalid configuration: {e}", file=sys.stderr)
        return EXIT_INVALID
    try:
        record = run_experiment(spec, jobs=args.jobs)
        path = emit_results(record, spec.format, spec.out)
    except (StabilityLabError, OSError) as e:
        print(f"stabilitylab: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    print(path)
    if record.failures:
        print(f"stabilitylab: {len(record.failures)} failed cells, first: {record.failures[0]['error']}",
              file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
