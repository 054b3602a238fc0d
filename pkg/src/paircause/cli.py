"""Command-line front end: classify, bench, tune, and screen subcommands.

Every command is deterministic given (config, dataset bytes): outputs are
written in a fixed order with a header recording the effective configuration,
so re-runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classify import (
    AAG,
    INDECISIVE,
    HyperParams,
    classify,
    screen,
    screening_features,
)
from .config import (
    RunConfig,
    effective_dict,
    effective_json,
    load_config,
    make_design,
    make_hyperparams,
    validate_config,
)
from .direction import UNDECIDED, X_TO_Y, Y_TO_X
from .errors import ConfigError, DegenerateDataError, PaircauseError
from .evalbench import (
    DECISION_COLUMNS,
    RUN_COLUMNS,
    accuracy,
    accuracy_map,
    best_run,
    decision_row,
    evaluate_combo,
    roc_auc,
    run_doe,
    run_row,
    sweep_stats,
    write_accuracy_map_csv,
    write_csv,
)
from .classify import FEATURE_NAMES
from .errors import ScoringError
from .ingest import (
    SYNTHETIC_MECHANISMS,
    generate_synthetic,
    load_benchmark,
    load_meta,
    load_pair,
    normalize,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEGENERATE = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for
    # degenerate data here, so remap to the input-error code.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _parse_ids(text: str) -> list[int]:
    return [int(token) for token in text.split(",") if token.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paircause", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--data", help="dataset directory with pairNNNN.txt files")
    common.add_argument("--meta", help="metadata file (default: <data>/pairmeta.txt)")
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--method", choices=("aag", "monotonicity", "monot"))
    common.add_argument("--metric")
    common.add_argument("--k", type=int)
    common.add_argument("--bw", type=float, help="bandwidth factor bw_par")
    common.add_argument("--m", type=int, help="contour level for the jaccard metric")
    common.add_argument("--gamma-star", type=float)
    common.add_argument("--regularization", choices=("weighted", "zone"))
    common.add_argument("--max-id", type=int)
    common.add_argument("--exclude", help="comma-separated pair ids to drop")
    common.add_argument("--screen", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, help="seed for synthetic pairs")
    common.add_argument("--use-weights", action="store_true", default=None)

    p_classify = sub.add_parser(
        "classify", parents=[common], help="classify one pair"
    )
    p_classify.add_argument("--id", type=int, help="benchmark pair id")
    p_classify.add_argument("--pair-file", help="two-column numeric text file")
    p_classify.add_argument("--cause-col", type=int, default=1)
    p_classify.add_argument("--effect-col", type=int, default=2)
    p_classify.add_argument(
        "--synthetic", choices=SYNTHETIC_MECHANISMS, help="generate a seeded pair"
    )
    p_classify.add_argument("--n", type=int, default=500)
    p_classify.add_argument("--noise-sd", type=float, default=0.05)

    sub.add_parser("bench", parents=[common], help="score a dataset")
    sub.add_parser("tune", parents=[common], help="full-factorial sweep")
    sub.add_parser("screen", parents=[common], help="screening features and flags")
    return parser


def _merge_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    if args.data is not None:
        config.data_dir = args.data
    if args.meta is not None:
        config.meta_file = args.meta
    if args.method is not None:
        config.method = "monotonicity" if args.method == "monot" else args.method
    if args.metric is not None:
        config.metric = args.metric
    if args.k is not None:
        config.k = args.k
    if args.bw is not None:
        config.bw_par = args.bw
    if args.m is not None:
        config.m = args.m
    if args.gamma_star is not None:
        config.gamma_star = args.gamma_star
    if args.regularization is not None:
        config.regularization = args.regularization
    if args.max_id is not None:
        config.max_id = args.max_id
    if args.exclude is not None:
        config.exclude_ids = _parse_ids(args.exclude)
    if args.screen is not None:
        config.screen = args.screen
    if args.workers is not None:
        config.workers = args.workers
    if args.out is not None:
        config.out_dir = args.out
    if args.format is not None:
        config.format = args.format
    if args.seed is not None:
        config.seed = args.seed
    if args.use_weights is not None:
        config.use_weights = args.use_weights
    validate_config(config, source="flags")
    return config


def _load_pairs(config: RunConfig):
    if config.data_dir is None:
        raise ConfigError("a dataset directory is required (--data or data_dir)")
    pairs = load_benchmark(
        config.data_dir,
        meta_path=config.meta_file,
        exclude_ids=set(config.exclude_ids),
        max_id=config.max_id,
    )
    if not pairs:
        raise ConfigError("no pairs left after filtering")
    return [normalize(pair) for pair in pairs]


def _write_text(path, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _write_json(path, payload) -> None:
    _write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _write_rows(config, path_base, columns, rows, json_rows) -> str:
    """Write rows as CSV or JSON per the configured format; returns the path."""
    if config.format == "csv":
        path = path_base + ".csv"
        with open(path, "w") as fh:
            write_csv(fh, columns, rows, header_comment=f"config {effective_json(config)}")
    else:
        path = path_base + ".json"
        _write_json(path, {"config": effective_dict(config), "rows": json_rows})
    return path


def _decision_json(pair_id, truth, hp: HyperParams, decision) -> dict:
    return {
        "pair_id": pair_id,
        "method": decision.method,
        "metric": decision.metric if decision.metric else decision.regularization,
        "k": hp.k,
        "bw_par": hp.bw_par,
        "m": hp.m,
        "gamma_star": hp.gamma_star,
        "delta": decision.delta,
        "direction": decision.direction,
        "truth": truth,
        "correct": None if truth is None else decision.direction == truth,
    }


def _single_pair(args, config: RunConfig):
    chosen = [
        opt
        for opt, val in (
            ("--id", args.id),
            ("--pair-file", args.pair_file),
            ("--synthetic", args.synthetic),
        )
        if val is not None
    ]
    if len(chosen) != 1:
        raise ConfigError(
            f"classify needs exactly one of --id, --pair-file, --synthetic (got {chosen or 'none'})"
        )
    if args.pair_file is not None:
        return load_pair(args.pair_file, args.cause_col, args.effect_col)
    if args.synthetic is not None:
        return generate_synthetic(config.seed, args.n, args.synthetic, args.noise_sd)
    if config.data_dir is None:
        raise ConfigError("--id requires a dataset directory (--data)")
    meta_path = config.meta_file or os.path.join(config.data_dir, "pairmeta.txt")
    for meta in load_meta(meta_path):
        if meta.id == args.id:
            if not meta.is_scalar():
                raise ConfigError(f"pair {args.id} is not a scalar pair")
            cause, effect = meta.cause_cols[0], meta.effect_cols[0]
            pair = load_pair(
                os.path.join(config.data_dir, f"pair{meta.id:04d}.txt"),
                cause_col=min(cause, effect),
                effect_col=max(cause, effect),
                pair_id=meta.id,
            )
            pair.truth = X_TO_Y if cause < effect else Y_TO_X
            pair.weight = meta.weight
            return pair
    raise ConfigError(f"pair id {args.id} not found in {meta_path}")


def cmd_classify(args, config: RunConfig) -> int:
    pair = normalize(_single_pair(args, config))
    hp = make_hyperparams(config)
    decision = classify(pair, config.method, hp)
    os.makedirs(config.out_dir, exist_ok=True)
    path = _write_rows(
        config,
        os.path.join(config.out_dir, "decision"),
        DECISION_COLUMNS,
        [decision_row(pair.id, pair.truth, hp, decision)],
        [_decision_json(pair.id, pair.truth, hp, decision)],
    )
    print(
        f"pair {pair.id}: {decision.direction} "
        f"(delta={decision.delta!r}, method={decision.method}, "
        f"variant={decision.metric or decision.regularization}) -> {path}"
    )
    return EXIT_OK


def cmd_bench(args, config: RunConfig) -> int:
    pairs = _load_pairs(config)
    hp = make_hyperparams(config)
    record = evaluate_combo(pairs, config.method, hp)
    outcomes = sorted(record.outcomes, key=lambda o: o.pair_id)

    summary = {
        "command": "bench",
        "config": effective_dict(config),
        "n_pairs": len(outcomes),
        "accuracy": record.accuracy,
        "counts": {
            label: sum(1 for o in outcomes if o.decision.direction == label)
            for label in (X_TO_Y, Y_TO_X, UNDECIDED)
        },
    }
    if config.use_weights:
        summary["accuracy_weighted"] = accuracy(outcomes, weighted=True)
    try:
        summary["auc"] = roc_auc(
            [o.decision.delta for o in outcomes], [o.truth for o in outcomes]
        )
    except ScoringError:
        summary["auc"] = None

    os.makedirs(config.out_dir, exist_ok=True)
    rows = [decision_row(o.pair_id, o.truth, hp, o.decision) for o in outcomes]
    json_rows = [_decision_json(o.pair_id, o.truth, hp, o.decision) for o in outcomes]
    _write_rows(config, os.path.join(config.out_dir, "decisions"), DECISION_COLUMNS, rows, json_rows)

    if config.screen:
        features, flagged = _screen_pairs(pairs, config)
        _write_features(config, features)
        kept = [o for o in outcomes if o.pair_id not in flagged]
        summary["screening"] = {
            "flagged_ids": sorted(flagged),
            "n_flagged": len(flagged),
            "accuracy_unflagged": accuracy(kept) if kept else None,
        }
    _write_json(os.path.join(config.out_dir, "summary.json"), summary)

    print(f"pairs: {summary['n_pairs']}  accuracy: {summary['accuracy']:.4f}  auc: {summary['auc']}")
    if config.screen:
        scr = summary["screening"]
        print(
            f"screened out {scr['n_flagged']} pair(s) {scr['flagged_ids']}; "
            f"accuracy on the rest: {scr['accuracy_unflagged']}"
        )
    return EXIT_OK


def cmd_tune(args, config: RunConfig) -> int:
    pairs = _load_pairs(config)
    design = make_design(config)
    records = run_doe(pairs, design, workers=config.workers)

    os.makedirs(config.out_dir, exist_ok=True)
    header = f"config {effective_json(config)}"
    with open(os.path.join(config.out_dir, "runs.csv"), "w") as fh:
        write_csv(fh, RUN_COLUMNS, [run_row(r) for r in records], header_comment=header)

    best = best_run(records)
    stats = sweep_stats(records)
    hp = best.hyperparams
    summary = {
        "command": "tune",
        "config": effective_dict(config),
        "n_runs": len(records),
        "n_pairs": len(pairs),
        "best": {
            "method": best.method,
            "metric": hp.metric if hp.metric else hp.regularization,
            "k": hp.k,
            "bw_par": hp.bw_par,
            "m": hp.m,
            "gamma_star": hp.gamma_star,
            "accuracy": best.accuracy,
        },
        "stats": {
            "lcl5": stats.lcl5,
            "median": stats.median,
            "ucl95": stats.ucl95,
            "interval": stats.interval,
        },
    }
    _write_json(os.path.join(config.out_dir, "summary.json"), summary)

    # The k x bw accuracy surface is well-defined only for a two-factor sweep.
    only_two_factors = len(design.methods) == 1 and all(
        r.hyperparams.m is None and r.hyperparams.gamma_star is None for r in records
    )
    if only_two_factors:
        levels_k, levels_bw, matrix = accuracy_map(records)
        with open(os.path.join(config.out_dir, "accuracy_map.csv"), "w") as fh:
            write_accuracy_map_csv(fh, levels_k, levels_bw, matrix, header_comment=header)

    b = summary["best"]
    print(
        f"best: method={b['method']} metric={b['metric']} accuracy={b['accuracy']:.4f} "
        f"k={b['k']} bw_par={b['bw_par']} m={b['m']} gamma_star={b['gamma_star']}"
    )
    print(
        f"sweep: lcl5={stats.lcl5:.4f} median={stats.median:.4f} "
        f"ucl95={stats.ucl95:.4f} interval={stats.interval:.4f} over {len(records)} runs"
    )
    return EXIT_OK


def _screen_pairs(pairs, config: RunConfig):
    scr = config.screening
    rules = [tuple(rule) for rule in scr.rules]
    features = []
    flagged = set()
    for pair in pairs:
        feats = screening_features(
            pair, bins=scr.bins, k=scr.k, bw_par=scr.bw_par, m=scr.m
        )
        features.append((pair.id, feats))
        if screen(feats, rules) == INDECISIVE:
            flagged.add(pair.id)
    return features, flagged


def _write_features(config: RunConfig, features) -> str:
    columns = ("pair_id",) + FEATURE_NAMES
    rows = [
        [str(pid)] + [repr(float(v)) for v in feats.as_dict().values()]
        for pid, feats in features
    ]
    json_rows = [{"pair_id": pid, **feats.as_dict()} for pid, feats in features]
    return _write_rows(
        config, os.path.join(config.out_dir, "features"), columns, rows, json_rows
    )


def cmd_screen(args, config: RunConfig) -> int:
    pairs = _load_pairs(config)
    features, flagged = _screen_pairs(pairs, config)
    os.makedirs(config.out_dir, exist_ok=True)
    path = _write_features(config, features)
    flagged_ids = sorted(flagged)
    _write_rows(
        config,
        os.path.join(config.out_dir, "flagged"),
        ("pair_id",),
        [[str(pid)] for pid in flagged_ids],
        flagged_ids,
    )
    print(f"features for {len(features)} pair(s) -> {path}")
    print(f"flagged as indecisive: {flagged_ids}")
    return EXIT_OK


_COMMANDS = {
    "classify": cmd_classify,
    "bench": cmd_bench,
    "tune": cmd_tune,
    "screen": cmd_screen,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _merge_config(args)
        return _COMMANDS[args.command](args, config)
    except DegenerateDataError as exc:
        print(f"paircause: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (PaircauseError, OSError) as exc:
        print(f"paircause: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
