"""Deformation of simplex configurations onto pyramids (regular base, apex on the axis).

The path runs in two halves.  On ``[0, 1/2]`` the simplex is regularized
while the face opposite a wide vertex (solid angle above ``V/2``) is held
back in proportion to ``eta = 2 alpha / V - 1`` and the apex height is scaled
by ``1 - eta tau``.  On ``[1/2, 1]`` that face is regularized inside its own
hyperplane, with the apex carried along isometrically in the normal
direction.  A flat configuration (one vertex inside the hull of the others)
instead slides that vertex straight to the barycenter of its face.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spherical
from .config import resolve
from .errors import EmbeddingViolated, InvalidConfiguration
from .faces import DampedPath, FaceRegularization
from .geometry import (
    Configuration,
    Hyperplane,
    Simplex,
    as_points,
    canonical_normal,
    classify,
    eta_from_alpha,
    greatest_solid_angle,
    is_embedded,
)
from .regularize import OmegaPath
from .trajectory import Trajectory, uniform_times

__all__ = [
    "PsiPlan",
    "PyramidK",
    "is_pyramid_k",
    "plan_psi",
    "psi",
    "psi_trajectory",
    "pyramid_k_decomposition",
    "regular_height",
]


def regular_height(n):
    """Height of a unit-edge regular n-simplex over any facet."""
    return math.sqrt((n + 1.0) / (2.0 * n))


@dataclass(frozen=True, eq=False)
class PsiPlan:
    """Everything about ``psi(config, .)`` that does not depend on ``t``.

    ``branch`` is ``"regular"`` (no wide vertex), ``"damped"`` (a vertex with
    solid angle in ``(V/2, V)``) or ``"flat"`` (a vertex inside the hull of
    the others).
    """

    branch: str
    start: np.ndarray
    apex: int | None
    alpha: float
    eta: float
    literal_scale: bool
    first: object
    middle: np.ndarray
    second: FaceRegularization | None

    def sigma(self, tau):
        """Perpendicular scale applied to the apex height during the first half."""
        if self.literal_scale:
            return (1.0 - self.eta) * tau
        return 1.0 - self.eta * tau

    def first_half(self, tau):
        if self.branch == "regular":
            return self.first.at(tau)
        if self.branch == "flat":
            out = self.start.copy()
            out[self.apex] = (1.0 - tau) * self.start[self.apex] + tau * self.first
            return out
        return self.first.at(tau, self.sigma(tau))

    def at(self, t):
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t={t} outside [0, 1]")
        if t <= 0.5:
            return self.first_half(2.0 * t)
        if self.second is None:
            return self.middle.copy()
        return self.second.at(self.middle, 2.0 * t - 1.0)


def plan_psi(config, tol=None, table_size=None, literal_scale=False):
    """Classify ``config`` and precompute the path ``psi(config, .)``."""
    tol = resolve(tol)
    if config.kind != "K":
        raise ValueError("psi acts on kind-K configurations")
    if not is_embedded(config, tol):
        raise InvalidConfiguration("configuration is not embedded")
    pts = np.array(config.points, dtype=float)
    n = config.n
    cls = classify(config, tol)
    v = spherical.half_sphere_volume(n)
    if isinstance(cls, Hyperplane):
        apex = cls.interior
        face = [i for i in range(n + 1) if i != apex]
        target = pts[face].mean(axis=0)
        middle = pts.copy()
        middle[apex] = target
        return PsiPlan("flat", pts, apex, v, 1.0, literal_scale, target, middle,
                       FaceRegularization(pts[face]))
    alpha, apex = greatest_solid_angle(Simplex(pts, tol), tol, table_size)
    if alpha <= 0.5 * v:
        path = OmegaPath(pts)
        return PsiPlan("regular", pts, None, alpha, 0.0, literal_scale, path,
                       path.at(1.0), None)
    eta = eta_from_alpha(alpha, n, clamp=True)
    path = DampedPath(pts, apex, eta)
    plan = PsiPlan("damped", pts, apex, alpha, eta, literal_scale, path, None, None)
    middle = plan.first_half(1.0)
    face = [i for i in range(n + 1) if i != apex]
    return PsiPlan("damped", pts, apex, alpha, eta, literal_scale, path, middle,
                   FaceRegularization(middle[face]))


def psi(config, t, tol=None, table_size=None, literal_scale=False, plan=None):
    """The configuration at time ``t`` of the retraction onto pyramids."""
    if plan is None:
        plan = plan_psi(config, tol, table_size, literal_scale)
    return Configuration("K", plan.at(float(t)))


def psi_trajectory(config, samples=64, tol=None, table_size=None, literal_scale=False,
                   check_embedding=True):
    """Sample ``psi`` on a uniform grid; raise :class:`EmbeddingViolated` if a sample degenerates."""
    tol = resolve(tol)
    plan = plan_psi(config, tol, table_size, literal_scale)
    times = uniform_times(samples)
    frames = []
    for t in times:
        pts = plan.at(float(t))
        if check_embedding and not is_embedded(Configuration("K", pts), tol):
            raise EmbeddingViolated(f"configuration leaves the embedded space at t={t:.6g}",
                                    t=float(t))
        frames.append(pts)
    return Trajectory("K", times, frames)


@dataclass(frozen=True, eq=False)
class PyramidK:
    """A pyramid in normalized form: unit base edges, base barycenter at the origin.

    ``frame`` has the base hyperplane in its first ``n - 1`` columns and the
    axis (pointing at the apex when ``height > 0``) in its last column.
    """

    apex: int
    base: tuple
    height: float
    scale: float
    center: np.ndarray
    frame: np.ndarray
    spread: float
    offset: float


def _edge_stats(points):
    d = points[:, None, :] - points[None, :, :]
    lengths = np.sqrt((d ** 2).sum(-1))[np.triu_indices(len(points), 1)]
    mean = float(lengths.mean())
    return mean, float(lengths.max() - lengths.min()) / mean if mean > 0 else math.inf


def _frame(face, nu):
    n = len(nu)
    u, _, _ = np.linalg.svd((face[1:] - face[0]).T, full_matrices=True)
    frame = np.column_stack([u[:, : n - 1], nu])
    if np.linalg.det(frame) < 0:
        frame[:, 0] = -frame[:, 0]
    return frame


def pyramid_k_decomposition(config, tol=1e-6):
    """Return a :class:`PyramidK` if ``config`` is a pyramid up to translation and scale, else ``None``.

    Candidate apexes are tried in index order.
    """
    pts = as_points(config.points if isinstance(config, Configuration) else config)
    m, n = pts.shape
    if m != n + 1:
        raise ValueError("a pyramid has n + 1 points")
    h_max = regular_height(n)
    for apex in range(m):
        base = [i for i in range(m) if i != apex]
        face = pts[base]
        scale, spread = _edge_stats(face)
        if not spread <= tol:
            continue
        center = face.mean(axis=0)
        nu = canonical_normal(face)
        rel = (pts[apex] - center) / scale
        h = float(rel @ nu)
        offset = float(np.linalg.norm(rel - h * nu))
        if offset > tol or abs(h) > h_max + tol:
            continue
        if h < 0:
            nu = -nu
        return PyramidK(apex, tuple(base), abs(h), scale, center, _frame(face, nu),
                        spread, offset)
    return None


def is_pyramid_k(config, tol=1e-6):
    return pyramid_k_decomposition(config, tol) is not None
