"""Loading, filtering, and normalization of bivariate cause-effect pairs."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .direction import X_TO_Y, Y_TO_X, flip
from .errors import (
    DegenerateDataError,
    DimensionError,
    PairFormatError,
    ParameterError,
)

DEFAULT_EXCLUDED_IDS = frozenset({52, 53, 54, 55, 71})


@dataclass
class PairSample:
    """One bivariate sample set with optional ground-truth direction."""

    id: int
    x: np.ndarray
    y: np.ndarray
    truth: str | None = None
    weight: float = 1.0


@dataclass
class PairMeta:
    """One line of benchmark metadata; column ranges are 1-based inclusive."""

    id: int
    cause_cols: tuple[int, int]
    effect_cols: tuple[int, int]
    weight: float

    def is_scalar(self) -> bool:
        return (
            self.cause_cols[0] == self.cause_cols[1]
            and self.effect_cols[0] == self.effect_cols[1]
        )


def load_pair(path, cause_col=1, effect_col=2, pair_id=0) -> PairSample:
    """Read two 1-based columns of a whitespace-separated numeric file.

    The cause column becomes x and the effect column y; no ground truth is
    attached.  Blank lines are skipped; a non-numeric or short row is an
    error reported with its line number.
    """
    if min(cause_col, effect_col) < 1:
        raise DimensionError(
            f"column indexes are 1-based, got ({cause_col}, {effect_col})"
        )
    need = max(cause_col, effect_col)
    xs, ys = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < need:
                raise DimensionError(
                    f"{path}:{lineno}: row has {len(parts)} columns, need {need}"
                )
            try:
                xv = float(parts[cause_col - 1])
                yv = float(parts[effect_col - 1])
            except ValueError:
                raise PairFormatError(
                    "non-numeric value in row", path=path, line=lineno
                ) from None
            if not (math.isfinite(xv) and math.isfinite(yv)):
                raise PairFormatError(
                    "non-finite value in row", path=path, line=lineno
                )
            xs.append(xv)
            ys.append(yv)
    if len(xs) < 2:
        raise PairFormatError(f"need at least 2 rows, found {len(xs)}", path=path)
    return PairSample(id=pair_id, x=np.asarray(xs), y=np.asarray(ys))


def load_meta(path) -> list[PairMeta]:
    """Parse benchmark metadata, six whitespace-separated fields per line:
    id, cause_first, cause_last, effect_first, effect_last, weight."""
    metas = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise PairFormatError(
                    f"expected 6 fields, got {len(parts)}", path=path, line=lineno
                )
            try:
                pid, c0, c1, e0, e1 = (int(p) for p in parts[:5])
                weight = float(parts[5])
            except ValueError:
                raise PairFormatError(
                    "non-numeric metadata field", path=path, line=lineno
                ) from None
            if c0 > c1 or e0 > e1:
                raise PairFormatError(
                    "column range has first > last", path=path, line=lineno
                )
            metas.append(PairMeta(pid, (c0, c1), (e0, e1), weight))
    return metas


def format_meta(metas) -> str:
    """Render metadata back into the six-field text format."""
    lines = [
        f"{m.id} {m.cause_cols[0]} {m.cause_cols[1]} "
        f"{m.effect_cols[0]} {m.effect_cols[1]} {m.weight:g}"
        for m in metas
    ]
    return "\n".join(lines) + "\n" if lines else ""


def select_pairs(metas, exclude_ids=None, max_id=None) -> list[PairMeta]:
    """Keep scalar pairs only, drop excluded ids, enforce an optional id cap."""
    if exclude_ids is None:
        exclude_ids = DEFAULT_EXCLUDED_IDS
    exclude_ids = set(exclude_ids)
    out = []
    for meta in metas:
        if not meta.is_scalar():
            continue
        if meta.id in exclude_ids:
            continue
        if max_id is not None and meta.id > max_id:
            continue
        out.append(meta)
    return out


def normalize(pair: PairSample) -> PairSample:
    """Map both coordinates affinely onto [0, 1].

    Raises DegenerateDataError when a coordinate has zero range.
    """
    scaled = []
    for name, v in (("x", pair.x), ("y", pair.y)):
        lo, hi = float(np.min(v)), float(np.max(v))
        if hi <= lo:
            raise DegenerateDataError(f"pair {pair.id}: {name} has zero range")
        scaled.append((v - lo) / (hi - lo))
    return replace(pair, x=scaled[0], y=scaled[1])


def swap_pair(pair: PairSample) -> PairSample:
    """Exchange the coordinates, flipping the ground truth accordingly."""
    truth = flip(pair.truth) if pair.truth is not None else None
    return replace(pair, x=pair.y, y=pair.x, truth=truth)


_MECHANISMS = {
    "quadratic": lambda x: x**2,
    "sine": lambda x: np.sin(2.0 * np.pi * x),
    "sigmoid": lambda x: 1.0 / (1.0 + np.exp(-10.0 * (x - 0.5))),
}

SYNTHETIC_MECHANISMS = tuple(sorted(_MECHANISMS))


def generate_synthetic(seed, n, mechanism, noise_sd) -> PairSample:
    """Draw an additive-noise pair y = f(x) + e with known x->y truth.

    x is uniform on [0, 1] and e is Gaussian with the given standard
    deviation, both from the counter-based Philox generator, so identical
    arguments give bit-identical output on every platform.
    """
    if n < 50:
        raise ParameterError(f"need at least 50 samples, got {n}")
    if noise_sd <= 0:
        raise ParameterError(f"noise_sd must be positive, got {noise_sd}")
    try:
        f = _MECHANISMS[mechanism]
    except KeyError:
        raise ParameterError(
            f"unknown mechanism {mechanism!r}; choose from {SYNTHETIC_MECHANISMS}"
        ) from None
    rng = np.random.Generator(np.random.Philox(seed))
    x = rng.random(n)
    y = f(x) + rng.normal(0.0, noise_sd, size=n)
    return PairSample(id=seed, x=x, y=y, truth=X_TO_Y, weight=1.0)


def load_benchmark(data_dir, meta_path=None, exclude_ids=None, max_id=None):
    """Load the scalar benchmark pairs listed in a metadata file.

    Each pairNNNN.txt is read in file column order (the lower-numbered column
    becomes x) and the ground truth is taken from the metadata orientation,
    so the classifier never sees which coordinate is the cause.  Pairs are
    returned unnormalized.
    """
    if meta_path is None:
        meta_path = os.path.join(data_dir, "pairmeta.txt")
    metas = select_pairs(load_meta(meta_path), exclude_ids=exclude_ids, max_id=max_id)
    pairs = []
    for meta in metas:
        cause, effect = meta.cause_cols[0], meta.effect_cols[0]
        path = os.path.join(data_dir, f"pair{meta.id:04d}.txt")
        pair = load_pair(
            path,
            cause_col=min(cause, effect),
            effect_col=max(cause, effect),
            pair_id=meta.id,
        )
        pair.truth = X_TO_Y if cause < effect else Y_TO_X
        pair.weight = meta.weight
        pairs.append(pair)
    return pairs
