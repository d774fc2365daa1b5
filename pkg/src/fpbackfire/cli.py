"""Command-line interface.

Subcommands: estimate, table, calibrate, evaluate, experiment, curve. Data
goes to files or stdout; every run prints a banner with the version, the
seeds and hyperparameters in force, and a hash of each input file to stderr,
which is enough to reproduce any output byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import sys
from pathlib import Path

from . import __version__
from .calibration import TrainingConfig, train
from .conversion import backfire, level_for_language, load_programming_table, reverse_backfire
from .dataio import (
    emit_curve,
    open_for_write,
    read_projects_csv,
    read_weights_csv,
    write_curve_csv,
    write_fuzzy_levels_csv,
    write_programming_table_csv,
    write_report_csv,
    write_weights_csv,
)
from .errors import BackfireError, StaleWeightsError
from .experiments import (
    DEFAULT_EXPERIMENT_SEEDS,
    assign_levels,
    run_all,
    run_experiment,
)
from .fuzzy import infer_ratio, load_fuzzy_levels
from .metrics import evaluate as evaluate_pairs
from .metrics import improvement


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:12]


def _banner(command: str, inputs: dict[str, str | None], params: dict[str, object]) -> None:
    parts = [f"fpbackfire {__version__}", command]
    for name, path in inputs.items():
        parts.append(f"{name}={path}:sha256:{_sha256(path)}" if path else f"{name}=builtin")
    for name, value in params.items():
        parts.append(f"{name}={value}")
    print("# " + " | ".join(parts), file=sys.stderr)


def _load_models(args):
    table = load_programming_table(getattr(args, "table", None))
    levels = load_fuzzy_levels(getattr(args, "levels", None), table)
    return table, levels


def _read_weights_checked(path, levels):
    weights = read_weights_csv(path)
    if weights.levels_fingerprint != levels.fingerprint():
        raise StaleWeightsError(
            "weights file was calibrated against a different fuzzy level set"
        )
    return weights


def _training_config(args) -> TrainingConfig:
    return TrainingConfig(
        learning_rate=args.eta,
        max_epochs=args.epochs,
        error_goal=args.error_goal,
        rng_seed=args.seed,
        shuffle_each_epoch=not args.no_shuffle,
        scale_update_by_ufp=args.scale_by_ufp,
    )


def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--table", metavar="FILE", help="programming-table CSV (default: built-in)")
    parser.add_argument("--levels", metavar="FILE", help="fuzzy-level CSV (default: built-in)")


def _add_training_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--eta", type=float, default=1e-4, help="learning rate (default 1e-4)")
    parser.add_argument("--epochs", type=int, default=1000, help="epoch cap (default 1000)")
    parser.add_argument("--error-goal", type=float, default=1e-6,
                        help="stop once per-epoch error improves by less than this (default 1e-6)")
    parser.add_argument("--seed", type=int, default=0, help="training shuffle seed (default 0)")
    parser.add_argument("--no-shuffle", action="store_true",
                        help="visit records in dataset order instead of reshuffling each epoch")
    parser.add_argument("--scale-by-ufp", action="store_true",
                        help="scale each update by the record's UFP (shrink --eta accordingly)")


def cmd_estimate(args) -> int:
    table, levels = _load_models(args)
    if args.language is not None:
        language_level = level_for_language(table, args.language)
    else:
        language_level = args.level
    if args.weights is not None:
        peaks = _read_weights_checked(args.weights, levels).weights
    else:
        peaks = levels.avg_ratios
    ratio = infer_ratio(levels, peaks, language_level)
    print(f"language level: {language_level:.2f}")
    print(f"conversion ratio: {ratio:.2f} SLOC/FP")
    if args.fp is not None:
        print(f"estimated sloc: {backfire(args.fp, ratio):.2f}")
    else:
        print(f"estimated fp: {reverse_backfire(args.sloc, ratio):.2f}")
    return 0


def cmd_table(args) -> int:
    table, levels = _load_models(args)
    target = args.out if args.out else sys.stdout
    if args.kind == "languages":
        write_programming_table_csv(target, table)
    else:
        write_fuzzy_levels_csv(target, levels)
    return 0


def cmd_calibrate(args) -> int:
    table, levels = _load_models(args)
    records = assign_levels(read_projects_csv(args.data), table, levels)
    config = _training_config(args)
    weights = train([(r.level_index, r.ufp, r.sloc) for r in records], levels, config)
    write_weights_csv(args.out, weights, levels)
    print(f"epochs run: {weights.epochs_run}")
    print(f"final epoch error: {weights.final_epoch_error:.6g}")
    return 0


def cmd_evaluate(args) -> int:
    table, levels = _load_models(args)
    records = assign_levels(read_projects_csv(args.data), table, levels)
    ratio_cache = {
        lvl: infer_ratio(levels, levels.avg_ratios, lvl)
        for lvl in sorted({r.language_level for r in records})
    }
    baseline = evaluate_pairs(
        [(r.sloc, r.ufp * ratio_cache[r.language_level]) for r in records]
    )
    reports = [("baseline", baseline)]
    if args.weights is not None:
        weights = _read_weights_checked(args.weights, levels)
        cal_cache = {
            lvl: infer_ratio(levels, weights.weights, lvl)
            for lvl in sorted({r.language_level for r in records})
        }
        calibrated = evaluate_pairs(
            [(r.sloc, r.ufp * cal_cache[r.language_level]) for r in records]
        )
        reports.append(("calibrated", calibrated))

    for name, report in reports:
        print(
            f"{name}: n={report.n} mmre={report.mmre:.4f} mmer={report.mmer:.4f} "
            f"pred25={report.pred25:.4f} pred50={report.pred50:.4f}"
        )
    if len(reports) == 2:
        delta = improvement(reports[0][1], reports[1][1])
        print(
            f"improvement: mmre={delta.mmre_points:+.2f}pts mmer={delta.mmer_points:+.2f}pts "
            f"pred25={delta.pred25_points:+.2f}pts pred50={delta.pred50_points:+.2f}pts"
        )
    if args.out:
        with open_for_write(args.out) as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["model", "n", "mmre", "mmer", "pred25", "pred50"])
            for name, r in reports:
                writer.writerow([name, r.n, repr(r.mmre), repr(r.mmer), repr(r.pred25), repr(r.pred50)])
    return 0


def cmd_experiment(args) -> int:
    table, levels = _load_models(args)
    records = assign_levels(read_projects_csv(args.data), table, levels)
    config = _training_config(args)
    if args.all:
        results = run_all(records, levels, config)
    else:
        results = [run_experiment(args.id, records, levels, config)]
    seeds = {
        r.experiment_id: r.split.seed for r in results if r.split.seed is not None
    }
    rows = [r.improvement for r in results]
    write_report_csv(args.out, rows, split_seeds=seeds, training_config=config)
    if args.weights_dir:
        directory = Path(args.weights_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for result in results:
            write_weights_csv(
                directory / f"weights-{result.experiment_id}.csv", result.weights, levels
            )
    if seeds:
        echoed = " ".join(f"{k}={v}" for k, v in sorted(seeds.items()))
        print(f"# split seeds: {echoed}", file=sys.stderr)
    if args.plot:
        from .plots import plot_improvements

        plot_improvements(rows, args.plot)
    return 0


def cmd_curve(args) -> int:
    table, levels = _load_models(args)
    curves = {"default": emit_curve(levels)}
    points = curves["default"]
    if args.weights is not None:
        weights = _read_weights_checked(args.weights, levels)
        points = emit_curve(levels, weights.weights)
        curves["calibrated"] = points
    write_curve_csv(args.out if args.out else sys.stdout, points)
    if args.plot:
        from .plots import plot_curve

        plot_curve(curves, args.plot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpbackfire",
        description="Backfiring size conversion with calibrated fuzzy-level ratios.",
    )
    parser.add_argument("--version", action="version", version=f"fpbackfire {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="convert between function points and SLOC")
    who = p.add_mutually_exclusive_group(required=True)
    who.add_argument("--language", help="programming language name from the table")
    who.add_argument("--level", type=float, help="raw programming language level")
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--fp", type=float, help="function points to convert to SLOC")
    size.add_argument("--sloc", type=float, help="SLOC to convert to function points")
    p.add_argument("--weights", metavar="FILE", help="calibrated weights CSV")
    _add_model_options(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("table", help="emit the programming table or fuzzy levels as CSV")
    p.add_argument("--kind", choices=["languages", "levels"], default="languages")
    p.add_argument("--out", metavar="FILE", help="output file (default: stdout)")
    _add_model_options(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("calibrate", help="train calibrated weights from a dataset")
    p.add_argument("--data", required=True, metavar="FILE", help="project dataset CSV")
    p.add_argument("--out", required=True, metavar="FILE", help="weights CSV to write")
    _add_model_options(p)
    _add_training_options(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("evaluate", help="score baseline (and calibrated) ratios on a dataset")
    p.add_argument("--data", required=True, metavar="FILE", help="project dataset CSV")
    p.add_argument("--weights", metavar="FILE", help="calibrated weights CSV")
    p.add_argument("--out", metavar="FILE", help="metrics CSV to write")
    _add_model_options(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="run the train/test experiment protocols")
    p.add_argument("--data", required=True, metavar="FILE", help="project dataset CSV")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--id", type=int, choices=range(1, 8), metavar="1..7",
                       help="run a single experiment")
    which.add_argument("--all", action="store_true", help="run experiments 1..7")
    p.add_argument("--out", required=True, metavar="FILE", help="report CSV to write")
    p.add_argument("--plot", metavar="FILE", help="also render the report as a figure")
    p.add_argument("--weights-dir", metavar="DIR",
                   help="also write each experiment's calibrated weights here")
    _add_model_options(p)
    _add_training_options(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("curve", help="emit the ratio-versus-level curve as CSV")
    p.add_argument("--weights", metavar="FILE", help="calibrated weights CSV")
    p.add_argument("--out", metavar="FILE", help="output file (default: stdout)")
    p.add_argument("--plot", metavar="FILE", help="also render the curve as a figure")
    _add_model_options(p)
    p.set_defaults(func=cmd_curve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    inputs = {
        name: getattr(args, name)
        for name in ("data", "table", "levels")
        if hasattr(args, name)
    }
    if getattr(args, "weights", None) is not None:
        inputs["weights"] = args.weights
    params: dict[str, object] = {}
    if hasattr(args, "eta"):
        params.update(eta=args.eta, epochs=args.epochs, error_goal=args.error_goal,
                      seed=args.seed)
    if getattr(args, "id", None) is not None:
        params["split_seed"] = DEFAULT_EXPERIMENT_SEEDS.get(args.id, "-")
    try:
        _banner(args.command, inputs, params)
        return args.func(args)
    except (BackfireError, OSError) as exc:
        print(f"fpbackfire: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
