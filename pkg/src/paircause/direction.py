"""Causal direction labels and the decision record."""

from __future__ import annotations

from dataclasses import dataclass

X_TO_Y = "x->y"
Y_TO_X = "y->x"
UNDECIDED = "undecided"

DIRECTIONS = (X_TO_Y, Y_TO_X, UNDECIDED)


def flip(direction: str) -> str:
    """Mirror a direction label under the x <-> y swap."""
    if direction == X_TO_Y:
        return Y_TO_X
    if direction == Y_TO_X:
        return X_TO_Y
    return direction


def direction_of(delta: float) -> str:
    """Sign convention shared by both methods: positive delta means x->y."""
    if delta > 0.0:
        return X_TO_Y
    if delta < 0.0:
        return Y_TO_X
    return UNDECIDED


@dataclass
class DirectionDecision:
    """Outcome of one classification: label, signed statistic, method tags."""

    direction: str
    delta: float
    method: str
    metric: str | None = None
    regularization: str | None = None
