"""Grid-based joint, conditional, and marginal distributions from a 2D
Gaussian kernel density fit."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, DimensionError, ParameterError

GIVEN_X = "given-x"
GIVEN_Y = "given-y"

_SINGULAR_RIDGE = 1e-12
_CHUNK_ELEMS = 4_000_000  # grid-point x sample elements per evaluation block


def grid_coords(k: int) -> np.ndarray:
    """k evenly spaced grid coordinates covering [0, 1] inclusive."""
    return np.linspace(0.0, 1.0, k)


@dataclass
class GridDistribution:
    """Probability masses on a k x k grid.

    mass[i, j] is the mass at (x_coords[i], y_coords[j]); entries are
    nonnegative and sum to 1.
    """

    k: int
    mass: np.ndarray
    x_coords: np.ndarray
    y_coords: np.ndarray

    @classmethod
    def from_array(cls, mass) -> "GridDistribution":
        """Build a distribution from nonnegative cell values, normalizing
        their total to 1."""
        mass = np.asarray(mass, dtype=float)
        if mass.ndim != 2 or mass.shape[0] != mass.shape[1]:
            raise DimensionError(f"grid must be square, got shape {mass.shape}")
        if mass.shape[0] < 3:
            raise ParameterError(f"grid size must be >= 3, got {mass.shape[0]}")
        if np.any(mass < 0):
            raise ParameterError("grid mass must be nonnegative")
        # fsum is exactly rounded, so the normalizer of a transposed grid is
        # bit-identical and transpose equivariance survives the division.
        total = math.fsum(mass.ravel())
        if total <= 0:
            raise ParameterError("grid has no mass")
        k = mass.shape[0]
        coords = grid_coords(k)
        return cls(k=k, mass=mass / total, x_coords=coords, y_coords=coords)


def transpose(dist: GridDistribution) -> GridDistribution:
    """Distribution of the swapped pair: mass[i, j] -> mass[j, i]."""
    return GridDistribution(
        k=dist.k,
        mass=np.ascontiguousarray(dist.mass.T),
        x_coords=dist.y_coords,
        y_coords=dist.x_coords,
    )


@dataclass
class Marginals:
    phi_x: np.ndarray
    phi_y: np.ndarray


def marginals(joint: GridDistribution) -> Marginals:
    """Row and column mass totals phi_x(X_i) and phi_y(Y_j)."""
    # Both axes reduce through the same contiguous-row path so that
    # marginals(transpose(P)) swaps the two vectors bitwise.
    phi_x = np.ascontiguousarray(joint.mass).sum(axis=1)
    phi_y = np.ascontiguousarray(joint.mass.T).sum(axis=1)
    return Marginals(phi_x=phi_x, phi_y=phi_y)


@dataclass
class ConditionalSlices:
    """Per-line conditional distributions along one axis.

    slices[i] is the distribution across the other axis at grid line i;
    slice_mass[i] is that line's marginal mass.  Lines whose marginal
    underflows to zero hold a uniform slice with slice_mass 0, so they carry
    no weight downstream.
    """

    axis: str
    slices: np.ndarray
    slice_mass: np.ndarray


def conditionals(joint: GridDistribution, axis: str) -> ConditionalSlices:
    """Conditional distribution at every grid line of the given axis."""
    if axis == GIVEN_X:
        rows = np.ascontiguousarray(joint.mass)
    elif axis == GIVEN_Y:
        rows = np.ascontiguousarray(joint.mass.T)
    else:
        raise ParameterError(f"unknown axis {axis!r}")
    line_mass = rows.sum(axis=1)
    slices = np.empty_like(rows)
    zero = line_mass == 0.0
    slices[zero] = 1.0 / joint.k
    nonzero = ~zero
    slices[nonzero] = rows[nonzero] / line_mass[nonzero, None]
    return ConditionalSlices(axis=axis, slices=slices, slice_mass=line_mass)


def fit_joint(pair, k: int, bw_par: float) -> GridDistribution:
    """Gaussian KDE of a normalized pair evaluated on the k x k grid.

    The kernel covariance is bw_par**2 times the sample covariance of the
    points (ddof=1); grid values are normalized to total mass 1.  A singular
    sample covariance (perfectly collinear data) gets a 1e-12 diagonal ridge
    and a warning instead of aborting.
    """
    if k < 3:
        raise ParameterError(f"grid size must be >= 3, got {k}")
    if bw_par <= 0:
        raise ParameterError(f"bandwidth factor must be positive, got {bw_par}")
    x = np.asarray(pair.x, dtype=float)
    y = np.asarray(pair.y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DimensionError("x and y must be 1-D arrays of equal length")
    if x.size < 2:
        raise DegenerateDataError(f"pair {pair.id}: need at least 2 points")

    sxx, sxy, syy = _sample_cov(x, y)
    factor = bw_par * bw_par
    h00, h01, h11 = factor * sxx, factor * sxy, factor * syy
    det = h00 * h11 - h01 * h01
    if det <= 0.0:
        warnings.warn(
            f"pair {pair.id}: singular sample covariance, adding diagonal ridge",
            stacklevel=2,
        )
        h00 = factor * (sxx + _SINGULAR_RIDGE)
        h11 = factor * (syy + _SINGULAR_RIDGE)
        det = h00 * h11 - h01 * h01
    values = _kernel_grid_sum(x, y, grid_coords(k), h00, h01, h11, det)
    return GridDistribution.from_array(values)


def _sample_cov(x, y):
    # Explicit dot products: swapping x and y permutes operands of
    # commutative ops only, so the swapped covariance is an exact mirror.
    n1 = x.size - 1
    xc = x - x.mean()
    yc = y - y.mean()
    return float(xc @ xc) / n1, float(xc @ yc) / n1, float(yc @ yc) / n1


def _kernel_grid_sum(x, y, coords, h00, h01, h11, det):
    # Closed-form 2x2 inverse and a quadratic form arranged so the fit of the
    # swapped pair is the exact transpose of this fit (sums over samples keep
    # their order; the two squared terms only trade places).
    i00 = h11 / det
    i11 = h00 / det
    i01 = -h01 / det
    k = coords.size
    gx = np.repeat(coords, k)  # row-major grid: (X_i, Y_j)
    gy = np.tile(coords, k)
    out = np.empty(k * k)
    step = max(1, _CHUNK_ELEMS // max(1, x.size))
    for start in range(0, k * k, step):
        dx = gx[start : start + step, None] - x[None, :]
        dy = gy[start : start + step, None] - y[None, :]
        q = (i00 * (dx * dx) + i11 * (dy * dy)) + (2.0 * i01) * (dx * dy)
        out[start : start + step] = np.exp(-0.5 * q).sum(axis=1)
    return out.reshape(k, k)


def write_grid_csv(dist: GridDistribution, fh) -> None:
    """Write the mass grid as CSV: one row per X_i, one column per Y_j."""
    writer = csv.writer(fh, lineterminator="\n")
    for row in dist.mass:
        writer.writerow([repr(float(v)) for v in row])
