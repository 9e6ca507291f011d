"""Numerical tolerances and run-wide switches."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used for rank decisions, geometric membership and flow termination.

    ``rank`` is relative (ratio of singular values); ``geom`` applies to
    normalized coordinates and normalized affine-dependency coefficients.
    """

    rank: float = 1e-9
    geom: float = 1e-8
    flow: float = 1e-6

    def __post_init__(self):
        for name in ("rank", "geom", "flow"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be positive")


DEFAULT_TOL = Tolerances()


def resolve(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOL if tol is None else tol
