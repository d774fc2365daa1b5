"""Synthetic dataset generator, runnable as ``python -m fpbackfire.datagen``.

Produces project CSVs with known per-level conversion ratios and controlled
noise: exactly what the experiment harness needs when no real dataset is at
hand. Ratios default to each level's configured average; ``--drift-seed``
instead draws a random true ratio uniformly inside each level's clamp
bounds, and ``--ratio`` pins individual levels.
"""

from __future__ import annotations

import argparse
import random
import sys

from .conversion import load_programming_table
from .dataio import generate_synthetic_dataset, write_projects_csv
from .errors import BackfireError
from .fuzzy import load_fuzzy_levels


def _parse_ratio_override(text: str) -> tuple[int, float]:
    try:
        index, _, value = text.partition("=")
        return int(index), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected INDEX=RATIO, got {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m fpbackfire.datagen",
        description="Generate a synthetic project dataset with known conversion ratios.",
    )
    parser.add_argument("--out", required=True, metavar="FILE", help="dataset CSV to write")
    parser.add_argument("--per-level", type=int, default=200, metavar="N",
                        help="records per fuzzy level (default 200)")
    parser.add_argument("--noise", type=float, default=0.0, metavar="F",
                        help="relative noise amplitude on sloc (default 0)")
    parser.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    parser.add_argument("--ratio", action="append", type=_parse_ratio_override,
                        default=[], metavar="INDEX=RATIO",
                        help="pin one level's true ratio (repeatable)")
    parser.add_argument("--drift-seed", type=int, metavar="N",
                        help="draw every level's true ratio uniformly inside its clamp bounds")
    parser.add_argument("--ufp-min", type=float, default=10.0)
    parser.add_argument("--ufp-max", type=float, default=2000.0)
    parser.add_argument("--table", metavar="FILE", help="programming-table CSV (default: built-in)")
    parser.add_argument("--levels", metavar="FILE", help="fuzzy-level CSV (default: built-in)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        table = load_programming_table(args.table)
        levels = load_fuzzy_levels(args.levels, table)
        overrides = dict(args.ratio)
        if args.drift_seed is not None:
            rng = random.Random(args.drift_seed)
            drifted = {
                level.index: rng.uniform(level.clamp_min, level.clamp_max)
                for level in levels
            }
            drifted.update(overrides)  # explicit pins win over drawn ratios
            overrides = drifted
        records = generate_synthetic_dataset(
            levels,
            per_level_count=args.per_level,
            noise_fraction=args.noise,
            true_ratios=overrides or None,
            seed=args.seed,
            ufp_range=(args.ufp_min, args.ufp_max),
        )
        write_projects_csv(args.out, records)
    except (BackfireError, OSError) as exc:
        print(f"datagen: error: {exc}", file=sys.stderr)
        return 1
    print(f"# wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
