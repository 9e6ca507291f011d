"""Deformation of ``n + 2`` point configurations onto doubled pyramids.

The target is a regular n-simplex together with one extra point on the
axis of one of its faces ``F``: either inside the simplex between the
barycenters of the simplex and of ``F``, or outside it beyond ``F`` no
higher than a regular apex.  The path has three stages of equal length.

1. Straighten the degeneracy: an interior point slides towards the
   segment from the centroid ``c`` of the simplex around it to the centroid
   ``d`` of its nearest face; an edge crossing a face is transported so that
   it crosses at the face barycenter; a point on a face slides to its
   barycenter.
2. Regularize the simplex ``Y`` spanned by that face ``W`` and the remaining
   vertex while holding ``W`` back by ``1 - q``; the moving point follows
   the affine map of ``Y``.  A point on the far side of ``W`` is also
   flattened onto it.
3. Regularize ``W`` within its hyperplane.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import resolve
from .errors import DomainError, EmbeddingViolated, InvalidConfiguration
from .faces import DampedPath, FaceRegularization, scale_about_face, signed_height
from .geometry import (
    Boundary,
    Configuration,
    EdgeFace,
    Interior,
    affine_map_from_simplices,
    as_points,
    barycentric,
    canonical_normal,
    classify,
    is_embedded,
)
from .retract_k import _edge_stats, _frame, regular_height
from .trajectory import Trajectory, uniform_times

__all__ = [
    "LPlan",
    "PyramidL",
    "Stage1Params",
    "is_pyramid_l",
    "lambda_",
    "lambda_trajectory",
    "plan_lambda",
    "pyramid_l_decomposition",
    "s_param",
    "stage1_params",
    "step1",
    "step2",
    "step3",
]

DOMAIN_SLACK = 1e-12


def s_param(m, q, n=3):
    """``(1 - q) (1 - n m / (1 - q))^{1/q} + q``, extended by ``0`` on ``q = 0``.

    Defined for ``0 <= n m <= 1 - q <= 1`` minus the origin.  It equals 1 on
    ``m = 0`` and ``q`` on the far edge ``n m = 1 - q``.
    """
    m = float(m)
    q = float(q)
    if not (-DOMAIN_SLACK <= q <= 1.0 + DOMAIN_SLACK and -DOMAIN_SLACK <= n * m
            and n * m <= 1.0 - q + DOMAIN_SLACK):
        raise DomainError(f"(m, q) = ({m}, {q}) outside 0 <= n m <= 1 - q <= 1")
    if m <= 0.0 and q <= 0.0:
        raise DomainError("s(m, q) is undefined at m = q = 0")
    q = min(max(q, 0.0), 1.0)
    m = max(m, 0.0)
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 1.0
    base = min(max(1.0 - n * m / (1.0 - q), 0.0), 1.0)
    return (1.0 - q) * base ** (1.0 / q) + q


@dataclass(frozen=True)
class Stage1Params:
    """Parameters of the first stage.

    For an interior point ``v = q c + sum a_i v_i`` (``v_i`` the vertices of
    its nearest face) with ``m = min a_i`` and ``s = s_param(m, q)``.  For a
    crossing edge, ``l1 <= l2`` are the distances of its endpoints to the
    crossing point.
    """

    q: float = 0.0
    m: float = 0.0
    s: float = 0.0
    l1: float = 0.0
    l2: float = 0.0


@dataclass(frozen=True, eq=False)
class LPlan:
    """Which point moves and which simplex ``Y = W + {apex}`` carries it through stages 2 and 3.

    ``kind`` is ``"I"`` (interior point), ``"E"`` (edge through a face) or
    ``"B"`` (point on a face).  ``mover`` is the interior point, the nearer
    edge endpoint, or the face point; ``far`` is the other edge endpoint.
    """

    kind: str
    mover: int
    apex: int
    face: tuple
    far: int | None
    params: Stage1Params
    targets: dict

    @property
    def q(self):
        """Barycentric weight of the centroid of ``Y`` in the mover after stage 1."""
        return self.params.s if self.kind == "I" else 0.0


def _as_config(config):
    if isinstance(config, Configuration):
        if config.kind != "L":
            raise ValueError("kind-L configuration required")
        return config
    return Configuration("L", config)


def _interior_params(pts, v, n):
    others = [i for i in range(n + 2) if i != v]
    x = pts[others]
    bary = barycentric(pts[v], x)
    jj = int(np.argmin(bary))
    q = min(max((n + 1) * float(bary[jj]), 0.0), 1.0)
    a = np.delete(bary, jj) - bary[jj]
    m = max(float(a.min()), 0.0)
    s = s_param(m, q, n)
    j = others[jj]
    face = tuple(i for i in others if i != j)
    return j, face, Stage1Params(q=q, m=m, s=s)


def stage1_params(config, tol=None):
    """Classify an L configuration and return its :class:`LPlan`."""
    config = _as_config(config)
    tol = resolve(tol)
    pts = np.asarray(config.points)
    n = config.n
    cls = classify(config, tol)
    if isinstance(cls, Interior):
        v = cls.vertex
        j, face, params = _interior_params(pts, v, n)
        c = pts[[i for i in range(n + 2) if i != v]].mean(axis=0)
        d = pts[list(face)].mean(axis=0)
        target = (1.0 - params.s) * d + params.s * c
        return LPlan("I", v, j, face, None, params, {v: target})
    if isinstance(cls, EdgeFace):
        v1, v2 = cls.edge
        p = np.asarray(cls.radon_point)
        d = pts[list(cls.face)].mean(axis=0)
        l1 = float(np.linalg.norm(pts[v1] - p))
        l2 = float(np.linalg.norm(pts[v2] - p))
        r = l1 / l2
        targets = {v2: pts[v2] + r * (d - p), v1: pts[v1] + (1.0 + r * (1.0 - r)) * (d - p)}
        return LPlan("E", v1, v2, tuple(cls.face), v2, Stage1Params(l1=l1, l2=l2), targets)
    if isinstance(cls, Boundary):
        v = cls.vertex
        face = tuple(cls.face)
        apex = next(i for i in range(n + 2) if i != v and i not in face)
        return LPlan("B", v, apex, face, None, Stage1Params(), {v: pts[list(face)].mean(axis=0)})
    raise InvalidConfiguration(f"unexpected class {cls!r} for kind L")


def _stage1(pts, plan, t):
    out = pts.copy()
    for i, target in plan.targets.items():
        out[i] = (1.0 - t) * pts[i] + t * target
    return out


class _Stage2:
    def __init__(self, pts, plan, literal_scale=False):
        self.pts = pts
        self.plan = plan
        self.literal_scale = literal_scale
        self.ids = [plan.apex] + list(plan.face)
        self.y = pts[self.ids]
        self.path = DampedPath(self.y, 0, 1.0 - plan.q)
        face = pts[list(plan.face)]
        side_apex = signed_height(face, pts[plan.apex])
        side_mover = signed_height(face, pts[plan.mover])
        # the mover is flattened onto W only when it lies across W from the apex
        self.flatten = plan.kind != "I" and side_apex * side_mover < 0

    def sigma(self, tau):
        q = self.plan.q
        return q * tau if self.literal_scale else 1.0 - (1.0 - q) * tau

    def at(self, tau):
        y_t = self.path.at(tau)
        out = self.pts.copy()
        out[self.ids] = y_t
        if tau == 0.0:
            return out
        moved = affine_map_from_simplices(self.y, y_t)(self.pts[self.plan.mover])
        if self.flatten:
            moved = scale_about_face(y_t[1:], moved, self.sigma(tau))
        out[self.plan.mover] = moved
        return out


@dataclass(frozen=True, eq=False)
class _LPath:
    plan: LPlan
    start: np.ndarray
    first_end: np.ndarray
    second: _Stage2
    second_end: np.ndarray
    third: FaceRegularization

    def stage(self, k, tau):
        if k == 1:
            return _stage1(self.start, self.plan, tau)
        if k == 2:
            return self.second.at(tau)
        return self.third.at(self.second_end, tau)

    def at(self, t):
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t={t} outside [0, 1]")
        if t <= 1.0 / 3.0:
            return self.stage(1, min(3.0 * t, 1.0))
        if t <= 2.0 / 3.0:
            return self.stage(2, min(max(3.0 * t - 1.0, 0.0), 1.0))
        return self.stage(3, min(max(3.0 * t - 2.0, 0.0), 1.0))


def plan_lambda(config, tol=None, literal_scale=False):
    """Precompute the three stages of ``lambda_`` for ``config``."""
    config = _as_config(config)
    tol = resolve(tol)
    if not is_embedded(config, tol):
        raise InvalidConfiguration("configuration is not embedded")
    pts = np.array(config.points, dtype=float)
    plan = stage1_params(config, tol)
    first_end = _stage1(pts, plan, 1.0)
    second = _Stage2(first_end, plan, literal_scale)
    second_end = second.at(1.0)
    third = FaceRegularization(second_end[list(plan.face)])
    return _LPath(plan, pts, first_end, second, second_end, third)


def step1(config, t, tol=None):
    """First stage at local time ``t``."""
    config = _as_config(config)
    plan = stage1_params(config, tol)
    return config.with_points(_stage1(np.asarray(config.points, dtype=float), plan, float(t)))


def step2(config, t, tol=None, literal_scale=False):
    """Second stage at local time ``t``, for a configuration that ends the first stage."""
    config = _as_config(config)
    pts = np.array(config.points, dtype=float)
    plan = stage1_params(config, tol)
    return config.with_points(_Stage2(pts, plan, literal_scale).at(float(t)))


def step3(config, t, tol=None):
    """Third stage at local time ``t``: regularize the face ``W`` of the stage plan."""
    config = _as_config(config)
    pts = np.array(config.points, dtype=float)
    plan = stage1_params(config, tol)
    return config.with_points(FaceRegularization(pts[list(plan.face)]).at(pts, float(t)))


def lambda_(config, t, tol=None, literal_scale=False, path=None):
    """The configuration at time ``t`` of the retraction onto doubled pyramids."""
    if path is None:
        path = plan_lambda(config, tol, literal_scale)
    return Configuration("L", path.at(float(t)))


def lambda_trajectory(config, samples=96, tol=None, literal_scale=False, stage="all",
                      check_embedding=True):
    """Sample ``lambda_`` (or one stage of it, in local time) on a uniform grid."""
    tol = resolve(tol)
    path = plan_lambda(config, tol, literal_scale)
    times = uniform_times(samples)
    if stage == "all":
        sample = path.at
    else:
        k = int(stage)
        if k not in (1, 2, 3):
            raise ValueError("stage must be 1, 2, 3 or 'all'")
        sample = lambda tau: path.stage(k, tau)  # noqa: E731
    frames = []
    for t in times:
        pts = sample(float(t))
        if check_embedding and not is_embedded(Configuration("L", pts), tol):
            raise EmbeddingViolated(f"configuration leaves the embedded space at t={t:.6g}",
                                    t=float(t))
        frames.append(pts)
    return Trajectory("L", times, frames)


@dataclass(frozen=True, eq=False)
class PyramidL:
    """Regular simplex ``simplex`` plus ``apex`` on the axis of its face ``face``.

    ``height`` is the signed distance of the apex from ``face`` in units of
    the edge length, positive towards the simplex.
    """

    simplex: tuple
    apex: int
    face: tuple
    height: float
    scale: float
    center: np.ndarray
    frame: np.ndarray


def pyramid_l_decomposition(config, tol=1e-6):
    """Return a :class:`PyramidL` if ``config`` is a doubled pyramid up to translation and scale."""
    pts = as_points(config.points if isinstance(config, Configuration) else config)
    m, n = pts.shape
    if m != n + 2:
        raise ValueError("need n + 2 points")
    h_reg = regular_height(n)
    for apex in range(m):
        simplex = [i for i in range(m) if i != apex]
        scale, spread = _edge_stats(pts[simplex])
        if not spread <= tol:
            continue
        for opposite in simplex:
            face = [i for i in simplex if i != opposite]
            fp = pts[face]
            g = fp.mean(axis=0)
            nu = canonical_normal(fp)
            if (pts[opposite] - g) @ nu < 0:
                nu = -nu
            rel = (pts[apex] - g) / scale
            h = float(rel @ nu)
            if np.linalg.norm(rel - h * nu) > tol:
                continue
            if -h_reg - tol <= h <= h_reg / (n + 1) + tol:
                return PyramidL(tuple(simplex), apex, tuple(face), h, scale,
                                pts[simplex].mean(axis=0), _frame(fp, nu))
    return None


def is_pyramid_l(config, tol=1e-6):
    return pyramid_l_decomposition(config, tol) is not None


