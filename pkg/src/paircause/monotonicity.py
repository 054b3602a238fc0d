"""Weighted counts of gradient sign changes along each grid axis.

A line-by-line unimodal distribution produces few sign changes of its
gradient along that axis, so the axis with the larger weighted count is the
one behaving like a cause.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import GridDistribution, marginals
from .direction import DirectionDecision, direction_of
from .errors import ParameterError

WEIGHTED = "weighted"
ZONE = "zone"
REGULARIZATIONS = (WEIGHTED, ZONE)

X_AXIS = "x"
Y_AXIS = "y"

MONOTONICITY = "monotonicity"


@dataclass
class GradientField:
    """Per-cell gradient of mass along one axis, in index spacing."""

    axis: str
    values: np.ndarray


@dataclass
class MonotonicityResult:
    mi_x: float
    mi_y: float
    regularization: str
    gamma_star: float | None = None


def gradient_field(dist: GridDistribution, axis: str) -> GradientField:
    """Central differences inside, one-sided at the two borders, spacing 1."""
    if axis == X_AXIS:
        values = np.gradient(dist.mass, axis=0)
    elif axis == Y_AXIS:
        values = np.gradient(dist.mass, axis=1)
    else:
        raise ParameterError(f"unknown axis {axis!r}")
    return GradientField(axis=axis, values=values)


def _directional_index(lines, line_mass, regularization, gamma_star):
    # lines is C-contiguous with the scanned axis first; both axes share this
    # one code path so a transposed grid swaps (mi_x, mi_y) bit-exactly.
    grad = np.gradient(lines, axis=0)
    sign = np.sign(grad)
    changed = sign[1:, :] != sign[:-1, :]
    gamma = 0.5 * (np.abs(grad[1:, :]) + np.abs(grad[:-1, :]))
    if regularization == WEIGHTED:
        weights = line_mass[:-1, None] * gamma
    else:
        weights = line_mass[:-1, None] * (gamma > gamma_star)
    return float((weights * changed).sum())


def monotonicity_indexes(
    dist: GridDistribution, regularization: str, gamma_star=None
) -> MonotonicityResult:
    """Weighted numbers of gradient sign changes along x (mi_x) and y (mi_y).

    A sign change between adjacent cells counts whenever the sign (with
    sign(0) = 0) differs, so transitions into or out of an exact zero count.
    The weight of the pair (i, i+1) is the line's marginal mass at the left
    index times either the pair's mean absolute gradient (weighted) or a 0/1
    indicator of that mean exceeding gamma_star (zone).
    """
    if regularization not in REGULARIZATIONS:
        raise ParameterError(f"unknown regularization {regularization!r}")
    if regularization == ZONE:
        if gamma_star is None or gamma_star <= 0:
            raise ParameterError("zone regularization requires gamma_star > 0")
    elif gamma_star is not None:
        raise ParameterError("gamma_star applies only to zone regularization")
    marg = marginals(dist)
    mi_x = _directional_index(
        np.ascontiguousarray(dist.mass), marg.phi_x, regularization, gamma_star
    )
    mi_y = _directional_index(
        np.ascontiguousarray(dist.mass.T), marg.phi_y, regularization, gamma_star
    )
    return MonotonicityResult(
        mi_x=mi_x, mi_y=mi_y, regularization=regularization, gamma_star=gamma_star
    )


def monotonicity_decide(result: MonotonicityResult) -> DirectionDecision:
    """More modality along x than along y means x drives y."""
    delta = result.mi_x - result.mi_y
    return DirectionDecision(
        direction=direction_of(delta),
        delta=delta,
        method=MONOTONICITY,
        regularization=result.regularization,
    )
