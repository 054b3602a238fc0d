"""Full-factorial hyperparameter sweeps, accuracy and AUC scoring, and
sweep summary statistics."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .classify import AAG, HyperParams, classify
from .direction import X_TO_Y, Y_TO_X, DirectionDecision
from .errors import CoverageError, ParameterError, ScoringError
from .metrics import JACCARD_DIST, KS_DELTA_MAX, METRIC_KINDS
from .monotonicity import MONOTONICITY, REGULARIZATIONS, ZONE

DEFAULT_K_LEVELS = (20, 25, 30, 35, 40, 45, 50, 55, 60, 65)
DEFAULT_BW_LEVELS = (0.025, 0.050, 0.075, 0.100, 0.125, 0.150, 0.175, 0.200, 0.225, 0.250)
DEFAULT_M_LEVELS = (5, 6, 7, 8, 9)
DEFAULT_GAMMA_LEVELS = (1e-11, 1e-10, 1e-9, 1e-8, 1e-7)


@dataclass
class DoeDesign:
    """Factor levels for an exhaustive sweep.

    m levels apply only to the jaccard metric and gamma levels only to zone
    regularization; methods lists (method, variant) selectors where variant
    is a metric kind for aag and a regularization for monotonicity.
    """

    k_levels: tuple = DEFAULT_K_LEVELS
    bw_levels: tuple = DEFAULT_BW_LEVELS
    m_levels: tuple = DEFAULT_M_LEVELS
    gamma_levels: tuple = DEFAULT_GAMMA_LEVELS
    methods: tuple = ((AAG, "pearson"),)

    def validate(self) -> None:
        for name in ("k_levels", "bw_levels", "m_levels", "gamma_levels", "methods"):
            if not getattr(self, name):
                raise ParameterError(f"{name} must not be empty")
        for method, variant in self.methods:
            if method == AAG:
                if variant not in METRIC_KINDS:
                    raise ParameterError(f"unknown metric {variant!r}")
            elif method == MONOTONICITY:
                if variant not in REGULARIZATIONS:
                    raise ParameterError(f"unknown regularization {variant!r}")
            else:
                raise ParameterError(f"unknown method {method!r}")


def design_combos(design: DoeDesign, method: str, variant: str) -> list[HyperParams]:
    """All applicable factor combinations in lexicographic (k, bw, m|gamma)
    order."""
    combos = []
    for k in design.k_levels:
        for bw in design.bw_levels:
            if method == AAG and variant == JACCARD_DIST:
                for m in design.m_levels:
                    combos.append(HyperParams(k=int(k), bw_par=float(bw), metric=variant, m=int(m)))
            elif method == AAG:
                combos.append(HyperParams(k=int(k), bw_par=float(bw), metric=variant))
            elif method == MONOTONICITY and variant == ZONE:
                for gamma in design.gamma_levels:
                    combos.append(
                        HyperParams(
                            k=int(k),
                            bw_par=float(bw),
                            regularization=variant,
                            gamma_star=float(gamma),
                        )
                    )
            elif method == MONOTONICITY:
                combos.append(HyperParams(k=int(k), bw_par=float(bw), regularization=variant))
            else:
                raise ParameterError(f"unknown method {method!r}")
    return combos


@dataclass
class PairOutcome:
    pair_id: int
    truth: str
    weight: float
    decision: DirectionDecision

    @property
    def correct(self) -> bool:
        return self.decision.direction == self.truth


@dataclass
class RunRecord:
    """One factor combination with its per-pair decisions and accuracy."""

    method: str
    hyperparams: HyperParams
    outcomes: list = field(default_factory=list)
    accuracy: float = 0.0


def accuracy(outcomes, weighted: bool = False) -> float:
    """Fraction of correct directions; undecided never counts as correct."""
    if not outcomes:
        raise ScoringError("no outcomes to score")
    if weighted:
        total = sum(o.weight for o in outcomes)
        if total <= 0:
            raise ScoringError("total pair weight is zero")
        return sum(o.weight for o in outcomes if o.correct) / total
    return sum(1 for o in outcomes if o.correct) / len(outcomes)


def evaluate_combo(pairs, method: str, hp: HyperParams) -> RunRecord:
    """Classify every pair at one hyperparameter combination."""
    outcomes = []
    for pair in pairs:
        if pair.truth is None:
            raise ScoringError(f"pair {pair.id} has no ground truth")
        outcomes.append(
            PairOutcome(pair.id, pair.truth, pair.weight, classify(pair, method, hp))
        )
    return RunRecord(
        method=method, hyperparams=hp, outcomes=outcomes, accuracy=accuracy(outcomes)
    )


_WORKER_PAIRS = None


def _init_worker(pairs):
    global _WORKER_PAIRS
    _WORKER_PAIRS = pairs


def _run_task(task):
    method, hp = task
    return evaluate_combo(_WORKER_PAIRS, method, hp)


def run_doe(pairs, design: DoeDesign | None = None, workers: int = 1) -> list[RunRecord]:
    """Evaluate every selector over its full factorial.

    Records come back in the fixed lexicographic factor order regardless of
    the worker count, so serialized output is byte-identical for any
    parallelism level.
    """
    design = design if design is not None else DoeDesign()
    design.validate()
    for pair in pairs:
        if pair.truth is None:
            raise ScoringError(f"pair {pair.id} has no ground truth")
    tasks = []
    for method, variant in design.methods:
        for hp in design_combos(design, method, variant):
            tasks.append((method, hp))
    if workers <= 1:
        return [evaluate_combo(pairs, method, hp) for method, hp in tasks]
    chunk = max(1, len(tasks) // (workers * 4))
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(pairs,)
    ) as pool:
        return list(pool.map(_run_task, tasks, chunksize=chunk))


def best_run(records) -> RunRecord:
    """Highest accuracy; ties keep the earliest (smallest factor index)."""
    if not records:
        raise ParameterError("no run records")
    best = records[0]
    for record in records[1:]:
        if record.accuracy > best.accuracy:
            best = record
    return best


@dataclass
class SweepStats:
    lcl5: float
    median: float
    ucl95: float
    interval: float


def nearest_rank(sorted_values, pct: float):
    """Nearest-rank percentile: the ceil(pct/100 * N)-th smallest value."""
    n = len(sorted_values)
    rank = min(max(1, math.ceil(pct / 100.0 * n)), n)
    return sorted_values[rank - 1]


def sweep_stats(records) -> SweepStats:
    """Empirical 5th/50th/95th accuracy percentiles across a sweep."""
    if not records:
        raise ParameterError("no run records")
    accs = sorted(record.accuracy for record in records)
    lcl = nearest_rank(accs, 5.0)
    median = nearest_rank(accs, 50.0)
    ucl = nearest_rank(accs, 95.0)
    return SweepStats(lcl5=lcl, median=median, ucl95=ucl, interval=ucl - lcl)


def roc_auc(scores, truths) -> float:
    """Probability that a random x->y pair outscores a random y->x pair,
    with ties counting one half."""
    if len(scores) != len(truths) or not scores:
        raise ParameterError("scores and truths must be equal-length and non-empty")
    for truth in truths:
        if truth not in (X_TO_Y, Y_TO_X):
            raise ParameterError(f"truth labels must be directed, got {truth!r}")
    pos = [s for s, t in zip(scores, truths) if t == X_TO_Y]
    neg = [s for s, t in zip(scores, truths) if t == Y_TO_X]
    if not pos or not neg:
        raise ScoringError("AUC undefined: truths contain only one direction")
    wins = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def accuracy_map(records, axis1: str = "k", axis2: str = "bw_par"):
    """Accuracy matrix over a full two-factor sweep.

    Returns (levels1, levels2, matrix) with levels in first-appearance order;
    a missing or duplicated combination is a coverage error.
    """
    levels1, levels2 = [], []
    cells = {}
    for record in records:
        a = getattr(record.hyperparams, axis1, None)
        b = getattr(record.hyperparams, axis2, None)
        if a is None or b is None:
            raise CoverageError(f"record lacks factors {axis1!r}/{axis2!r}")
        if a not in levels1:
            levels1.append(a)
        if b not in levels2:
            levels2.append(b)
        if (a, b) in cells:
            raise CoverageError(f"duplicate combination {axis1}={a}, {axis2}={b}")
        cells[(a, b)] = record.accuracy
    matrix = []
    for a in levels1:
        row = []
        for b in levels2:
            if (a, b) not in cells:
                raise CoverageError(f"missing combination {axis1}={a}, {axis2}={b}")
            row.append(cells[(a, b)])
        matrix.append(row)
    return levels1, levels2, matrix


DECISION_COLUMNS = (
    "pair_id",
    "method",
    "metric",
    "k",
    "bw_par",
    "m",
    "gamma_star",
    "delta",
    "direction",
    "truth",
    "correct",
)

RUN_COLUMNS = ("method", "metric", "k", "bw_par", "m", "gamma_star", "accuracy")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def variant_of(decision: DirectionDecision) -> str:
    """Report tag for the method variant: metric kind or regularization."""
    return decision.metric if decision.metric is not None else decision.regularization


def decision_row(pair_id, truth, hp: HyperParams, decision: DirectionDecision) -> list[str]:
    correct = "" if truth is None else str(int(decision.direction == truth))
    return [
        _fmt(pair_id),
        decision.method,
        variant_of(decision) or "",
        _fmt(hp.k),
        _fmt(hp.bw_par),
        _fmt(hp.m),
        _fmt(hp.gamma_star),
        _fmt(decision.delta),
        decision.direction,
        truth or "",
        correct,
    ]


def run_row(record: RunRecord) -> list[str]:
    hp = record.hyperparams
    variant = hp.metric if hp.metric is not None else hp.regularization
    return [
        record.method,
        variant or "",
        _fmt(hp.k),
        _fmt(hp.bw_par),
        _fmt(hp.m),
        _fmt(hp.gamma_star),
        _fmt(record.accuracy),
    ]


def write_csv(fh, columns, rows, header_comment: str | None = None) -> None:
    """CSV with LF line endings and an optional leading '#' comment line."""
    if header_comment:
        fh.write(f"# {header_comment}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)


def write_accuracy_map_csv(
    fh, levels1, levels2, matrix, axis1: str = "k", axis2: str = "bw_par",
    header_comment: str | None = None,
) -> None:
    """Accuracy matrix as CSV with level headers on both axes."""
    if header_comment:
        fh.write(f"# {header_comment}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([f"{axis1}\\{axis2}"] + [_fmt(level) for level in levels2])
    for level, row in zip(levels1, matrix):
        writer.writerow([_fmt(level)] + [_fmt(v) for v in row])
