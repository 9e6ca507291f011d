"""Equivariant simplex regularization and retractions of linear configuration spaces."""
from ._accel import BACKEND
from .config import DEFAULT_TOL, Tolerances
from .geometry import AffineMap, Configuration, Simplex, classify, radon_partition
from .regularize import inradius_flow, omega, phi, regularize_bimedian
from .retract_k import is_pyramid_k, psi, psi_trajectory
from .retract_l import is_pyramid_l, lambda_, lambda_trajectory
from .trajectory import Trajectory

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "BACKEND",
    "Configuration",
    "DEFAULT_TOL",
    "Simplex",
    "Tolerances",
    "Trajectory",
    "classify",
    "inradius_flow",
    "is_pyramid_k",
    "is_pyramid_l",
    "lambda_",
    "lambda_trajectory",
    "omega",
    "phi",
    "psi",
    "psi_trajectory",
    "radon_partition",
    "regularize_bimedian",
]
