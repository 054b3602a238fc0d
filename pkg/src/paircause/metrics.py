"""Deviation scores between two grid distributions.

Every kind is oriented so that a lower value means closer distributions;
similarity-style quantities (Pearson, Jaccard, mutual information) are
converted to dissimilarities for that reason.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .density import GridDistribution
from .errors import DimensionError, ParameterError

KL = "kl"
COSINE = "cosine"
ENTROPY = "entropy"
MI_SCALED = "mi"
MI_NORMALIZED = "mi_norm"
PEARSON_DIST = "pearson"
KS_MEAN = "ks_mean"
KS_MAX = "ks_max"
KS_DELTA_MAX = "ks_delta_max"
JACCARD_DIST = "jaccard"

METRIC_KINDS = (
    KL,
    COSINE,
    ENTROPY,
    MI_SCALED,
    MI_NORMALIZED,
    PEARSON_DIST,
    KS_MEAN,
    KS_MAX,
    KS_DELTA_MAX,
    JACCARD_DIST,
)

_KL_FLOOR = 1e-12
_MI_BINS = 64


@dataclass
class LevelMask:
    """Cells holding more than level/10 of the peak mass."""

    level: int
    cells: np.ndarray


def level_mask(dist: GridDistribution, m: int) -> LevelMask:
    """Threshold the grid at m/10 of its peak (strict), always keeping the
    peak cells themselves so the mask is never empty."""
    if int(m) != m or not 1 <= int(m) <= 9:
        raise ParameterError(f"level m must be an integer in [1, 9], got {m}")
    mass = dist.mass
    peak = mass.max()
    cells = (mass > (int(m) * peak) / 10.0) | (mass == peak)
    return LevelMask(level=int(m), cells=cells)


def jaccard_index(a: LevelMask, b: LevelMask) -> float:
    """Intersection-over-union of two level masks."""
    inter = int(np.sum(a.cells & b.cells))
    union = int(np.sum(a.cells | b.cells))
    return inter / union if union else 1.0


def kl_divergence(p, q) -> float:
    """sum p*log(p/q) with q floored at 1e-12 and p == 0 cells contributing 0."""
    q = np.maximum(q, _KL_FLOOR)
    nz = p > 0.0
    return float(np.sum(p[nz] * np.log(p[nz] / q[nz])))


def cosine_distance(p, q) -> float:
    pf, qf = p.ravel(), q.ravel()
    return 1.0 - float(pf @ qf) / (
        float(np.linalg.norm(pf)) * float(np.linalg.norm(qf))
    )


def entropy_difference(p, q) -> float:
    """Information content of P minus that of Q (0*log 0 = 0).

    May be negative; only its difference across the two assumed directions
    carries meaning.
    """
    return float(np.sum(-xlogy(p, p) + xlogy(q, q)))


def _quantize(values) -> np.ndarray:
    """Equal-width 64-bin labels over the array's own [min, max] range."""
    v = values.ravel()
    lo, hi = float(v.min()), float(v.max())
    if hi <= lo:
        return np.zeros(v.size, dtype=np.intp)
    labels = (_MI_BINS * (v - lo) / (hi - lo)).astype(np.intp)
    return np.minimum(labels, _MI_BINS - 1)


def _label_mutual_information(p, q):
    """Mutual information (nats) of the paired cell-value bin labels, plus
    the two label entropies."""
    bp = _quantize(p)
    bq = _quantize(q)
    joint = np.bincount(bp * _MI_BINS + bq, minlength=_MI_BINS * _MI_BINS)
    joint = joint.reshape(_MI_BINS, _MI_BINS).astype(float) / bp.size
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    nz = joint > 0.0
    outer = np.outer(px, py)
    mi = float(np.sum(joint[nz] * np.log(joint[nz] / outer[nz])))
    hp = -float(np.sum(xlogy(px, px)))
    hq = -float(np.sum(xlogy(py, py)))
    return mi, hp, hq


def neg_mutual_information(p, q) -> float:
    mi, _, _ = _label_mutual_information(p, q)
    return -mi


def one_minus_nmi(p, q) -> float:
    """1 - MI / mean(label entropies), with NMI defined as 0 when either
    entropy is 0."""
    mi, hp, hq = _label_mutual_information(p, q)
    if hp == 0.0 or hq == 0.0:
        return 1.0
    return 1.0 - mi / (0.5 * (hp + hq))


def pearson_distance(p, q) -> float:
    """1 - r over the flattened grids; r taken as 0 when either is constant."""
    pc = p.ravel() - p.mean()
    qc = q.ravel() - q.mean()
    denom = float(np.linalg.norm(pc)) * float(np.linalg.norm(qc))
    if denom == 0.0:
        return 1.0
    return 1.0 - float(pc @ qc) / denom


def ks_mean(p, q) -> float:
    return float(np.abs(p - q).sum()) / p.size


def ks_max(p, q) -> float:
    return float(np.abs(p - q).max())


def jaccard_distance(p_dist, q_dist, m) -> float:
    return 1.0 - jaccard_index(level_mask(p_dist, m), level_mask(q_dist, m))


def deviation(kind: str, p: GridDistribution, q: GridDistribution, m=None) -> float:
    """Deviation of kind between distributions P and Q (lower = closer).

    The level m is required for the jaccard kind and rejected otherwise;
    ks_delta_max is not computable from (P, Q) and lives in delta_max().
    """
    if kind == KS_DELTA_MAX:
        raise ParameterError("ks_delta_max consumes two anticipated joints; use delta_max()")
    if kind not in METRIC_KINDS:
        raise ParameterError(f"unknown metric kind {kind!r}")
    if p.k != q.k:
        raise DimensionError(f"grid sizes differ: {p.k} vs {q.k}")
    if (m is not None) != (kind == JACCARD_DIST):
        raise ParameterError("level m is required for jaccard and only for jaccard")
    if kind == JACCARD_DIST:
        return jaccard_distance(p, q, m)
    pm, qm = p.mass, q.mass
    if kind == KL:
        return kl_divergence(pm, qm)
    if kind == COSINE:
        return cosine_distance(pm, qm)
    if kind == ENTROPY:
        return entropy_difference(pm, qm)
    if kind == MI_SCALED:
        return neg_mutual_information(pm, qm)
    if kind == MI_NORMALIZED:
        return one_minus_nmi(pm, qm)
    if kind == PEARSON_DIST:
        return pearson_distance(pm, qm)
    if kind == KS_MEAN:
        return ks_mean(pm, qm)
    return ks_max(pm, qm)


def delta_max(anticipated_xy, anticipated_yx) -> float:
    """Peak-height difference max(Q_yx) - max(Q_xy), used directly as the
    direction statistic."""
    if anticipated_xy.dist.k != anticipated_yx.dist.k:
        raise DimensionError(
            f"grid sizes differ: {anticipated_xy.dist.k} vs {anticipated_yx.dist.k}"
        )
    return float(anticipated_yx.dist.mass.max()) - float(anticipated_xy.dist.mass.max())
