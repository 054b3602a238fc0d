"""Direction decisions for one pair under either method, plus symmetric
screening statistics for flagging indecisive cases up front."""

from __future__ import annotations

import operator
from dataclasses import dataclass, fields

import numpy as np
from scipy import stats

from . import metrics as met
from .aag import anticipated_joint
from .density import fit_joint, transpose
from .direction import X_TO_Y, Y_TO_X, DirectionDecision, direction_of
from .errors import ConfigError, ParameterError
from .metrics import JACCARD_DIST, KS_DELTA_MAX, METRIC_KINDS
from .monotonicity import (
    MONOTONICITY,
    REGULARIZATIONS,
    ZONE,
    monotonicity_decide,
    monotonicity_indexes,
)

AAG = "aag"
METHODS = (AAG, MONOTONICITY)

DECISIVE = "decisive"
INDECISIVE = "indecisive"

DEFAULT_SCREEN_RULES = (("mutual_information", "<", 0.125),)

_RULE_OPS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


@dataclass
class HyperParams:
    """Hyperparameters for one classification.

    k and bw_par apply to both methods; metric selects the deviation-based
    variant (m only with jaccard), regularization the gradient-based variant
    (gamma_star only with zone).
    """

    k: int = 25
    bw_par: float = 0.175
    metric: str | None = None
    m: int | None = None
    regularization: str | None = None
    gamma_star: float | None = None

    def validate(self) -> None:
        if self.k < 3:
            raise ParameterError(f"grid size must be >= 3, got {self.k}")
        if self.bw_par <= 0:
            raise ParameterError(f"bandwidth factor must be positive, got {self.bw_par}")
        if self.metric is not None and self.metric not in METRIC_KINDS:
            raise ParameterError(f"unknown metric {self.metric!r}")
        if (self.m is not None) != (self.metric == JACCARD_DIST):
            raise ParameterError("level m is required with jaccard and only with jaccard")
        if self.m is not None and (int(self.m) != self.m or not 1 <= self.m <= 9):
            raise ParameterError(f"level m must be an integer in [1, 9], got {self.m}")
        if self.regularization is not None and self.regularization not in REGULARIZATIONS:
            raise ParameterError(f"unknown regularization {self.regularization!r}")
        if (self.gamma_star is not None) != (self.regularization == ZONE):
            raise ParameterError("gamma_star is required with zone and only with zone")
        if self.gamma_star is not None and self.gamma_star <= 0:
            raise ParameterError(f"gamma_star must be positive, got {self.gamma_star}")


def classify_aag(pair, hp: HyperParams) -> DirectionDecision:
    """Compare the fitted joint against both anticipated joints.

    delta = M(joint, anticipated y->x) - M(joint, anticipated x->y); the
    direction whose reconstruction deviates less wins, so positive delta
    means x->y.  The ks_delta_max metric compares the two anticipated peaks
    directly.
    """
    hp.validate()
    if hp.metric is None:
        raise ParameterError("aag classification requires a metric")
    joint = fit_joint(pair, hp.k, hp.bw_par)
    ant_xy = anticipated_joint(joint, X_TO_Y)
    ant_yx = anticipated_joint(joint, Y_TO_X)
    if hp.metric == KS_DELTA_MAX:
        delta = met.delta_max(ant_xy, ant_yx)
    else:
        delta = met.deviation(hp.metric, joint, ant_yx.dist, m=hp.m) - met.deviation(
            hp.metric, joint, ant_xy.dist, m=hp.m
        )
    return DirectionDecision(
        direction=direction_of(delta), delta=delta, method=AAG, metric=hp.metric
    )


def classify_monotonicity(pair, hp: HyperParams) -> DirectionDecision:
    """Fit the joint and compare the two gradient sign-change indexes."""
    hp.validate()
    if hp.regularization is None:
        raise ParameterError("monotonicity classification requires a regularization")
    joint = fit_joint(pair, hp.k, hp.bw_par)
    result = monotonicity_indexes(joint, hp.regularization, hp.gamma_star)
    return monotonicity_decide(result)


def classify(pair, method: str, hp: HyperParams) -> DirectionDecision:
    if method == AAG:
        return classify_aag(pair, hp)
    if method == MONOTONICITY:
        return classify_monotonicity(pair, hp)
    raise ParameterError(f"unknown method {method!r}")


@dataclass
class ScreeningFeatures:
    """Statistics invariant under swapping x and y."""

    mutual_information: float
    kendall_tau: float
    pearson_r: float
    spearman_rho: float
    kendall_r2: float
    pearson_r2: float
    spearman_r2: float
    cosine_similarity: float
    jaccard_symmetry: float
    diagonal_symmetry: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


FEATURE_NAMES = tuple(f.name for f in fields(ScreeningFeatures))


def histogram_mutual_information(x, y, bins: int) -> float:
    """Mutual information (nats) of the equal-width 2D histogram on [0,1]^2."""
    counts, _, _ = np.histogram2d(x, y, bins=bins, range=[[0.0, 1.0], [0.0, 1.0]])
    pxy = counts / counts.sum()
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    nz = pxy > 0.0
    outer = np.outer(px, py)
    return float(np.sum(pxy[nz] * np.log(pxy[nz] / outer[nz])))


def screening_features(
    pair, bins: int = 16, k: int = 25, bw_par: float = 0.175, m: int = 7
) -> ScreeningFeatures:
    """Compute the swap-symmetric screening statistics of a normalized pair.

    Sample-level statistics (histogram mutual information, the three
    correlations and their squares, cosine similarity) come from the raw
    samples; the two symmetry scores compare the fitted joint with its own
    transpose.
    """
    if bins < 2:
        raise ParameterError(f"need at least 2 histogram bins, got {bins}")
    x, y = pair.x, pair.y
    mi = histogram_mutual_information(x, y, bins)
    tau = float(stats.kendalltau(x, y).statistic)
    rho = float(stats.spearmanr(x, y).statistic)
    r = float(stats.pearsonr(x, y).statistic)
    cos = float(x @ y) / (float(np.linalg.norm(x)) * float(np.linalg.norm(y)))
    joint = fit_joint(pair, k, bw_par)
    flipped = transpose(joint)
    jac = met.jaccard_index(met.level_mask(joint, m), met.level_mask(flipped, m))
    diag = 1.0 - met.pearson_distance(joint.mass, flipped.mass)
    return ScreeningFeatures(
        mutual_information=mi,
        kendall_tau=tau,
        pearson_r=r,
        spearman_rho=rho,
        kendall_r2=tau * tau,
        pearson_r2=r * r,
        spearman_r2=rho * rho,
        cosine_similarity=cos,
        jaccard_symmetry=jac,
        diagonal_symmetry=diag,
    )


def screen(features: ScreeningFeatures, rules=DEFAULT_SCREEN_RULES) -> str:
    """Apply threshold rules; any firing rule marks the pair indecisive."""
    values = features.as_dict()
    for name, op, threshold in rules:
        if name not in values:
            raise ConfigError(f"unknown screening feature {name!r}")
        if op not in _RULE_OPS:
            raise ConfigError(f"unknown comparator {op!r}")
        if _RULE_OPS[op](values[name], float(threshold)):
            return INDECISIVE
    return DECISIVE
