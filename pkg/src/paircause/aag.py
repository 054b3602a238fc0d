"""Dual-response encode/decode of conditional slices.

Each conditional slice is summarized by its (mean, standard deviation) pair
and decoded back as a grid-sampled normal distribution; reassembling the
decoded slices scaled by their marginal masses yields the anticipated joint
under an assumed causal direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import (
    GIVEN_X,
    GIVEN_Y,
    ConditionalSlices,
    GridDistribution,
    conditionals,
)
from .direction import X_TO_Y, Y_TO_X
from .errors import ParameterError


@dataclass
class DualResponse:
    """Per-slice conditional means and standard deviations, in grid units."""

    axis: str
    mu: np.ndarray
    sigma: np.ndarray


@dataclass
class AnticipatedJoint:
    """Reassembled joint distribution under an assumed causal direction."""

    direction: str
    dist: GridDistribution


def dual_response(cond: ConditionalSlices, coords) -> DualResponse:
    """Discrete mean and standard deviation of every conditional slice.

    mu[i] = sum_j c_j * slice[i, j]
    sigma[i] = sqrt(sum_j (c_j - mu[i])^2 * slice[i, j])
    """
    coords = np.asarray(coords, dtype=float)
    mu = cond.slices @ coords
    dev = coords[None, :] - mu[:, None]
    var = (cond.slices * dev * dev).sum(axis=1)
    sigma = np.sqrt(np.maximum(var, 0.0))
    return DualResponse(axis=cond.axis, mu=mu, sigma=sigma)


def decode_slice(mu: float, sigma: float, coords) -> np.ndarray:
    """One decoded slice: a grid-sampled normal density renormalized to sum 1.

    sigma == 0, or a normal whose every grid evaluation underflows, degrades
    to a point mass at the grid coordinate nearest mu (ties broken toward the
    lower index).
    """
    coords = np.asarray(coords, dtype=float)
    if sigma > 0.0:
        z = (coords - mu) / sigma
        weights = np.exp(-0.5 * z * z)
        total = weights.sum()
        if total > 0.0:
            return weights / total
    out = np.zeros(coords.size)
    out[int(np.argmin(np.abs(coords - mu)))] = 1.0
    return out


def anticipated_joint(joint: GridDistribution, direction: str) -> AnticipatedJoint:
    """Rebuild the joint assuming one causal direction.

    Every conditioning line is replaced by its decoded slice scaled by the
    line's marginal mass, so the conditioning-axis marginal is preserved.
    Lines with zero marginal mass stay all-zero.
    """
    if direction == X_TO_Y:
        cond = conditionals(joint, GIVEN_X)
    elif direction == Y_TO_X:
        cond = conditionals(joint, GIVEN_Y)
    else:
        raise ParameterError(f"cannot anticipate direction {direction!r}")
    coords = joint.x_coords
    response = dual_response(cond, coords)
    rows = np.zeros((joint.k, joint.k))
    for i in range(joint.k):
        if cond.slice_mass[i] > 0.0:
            rows[i] = (
                decode_slice(response.mu[i], response.sigma[i], coords)
                * cond.slice_mass[i]
            )
    mass = rows if direction == X_TO_Y else np.ascontiguousarray(rows.T)
    dist = GridDistribution(
        k=joint.k, mass=mass, x_coords=joint.x_coords, y_coords=joint.y_coords
    )
    return AnticipatedJoint(direction=direction, dist=dist)
