"""Geometric types, degeneracy classification and solid-angle functionals.

Point sets are stored as ``(m, n)`` float arrays, one point per row.  All rank
and sign decisions are taken on a normalized copy (centroid at the origin,
unit RMS radius) so the tolerances in :class:`~simplexflows.config.Tolerances`
are scale free.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import spherical
from .config import Tolerances, resolve
from .errors import (
    DegenerateCone,
    DegenerateSimplex,
    InvalidConfiguration,
    NotGated,
    OutOfRange,
    RankDeficient,
)

__all__ = [
    "AffineMap",
    "Boundary",
    "Configuration",
    "EdgeFace",
    "Hyperplane",
    "Interior",
    "NonDegenerate",
    "RadonResult",
    "Simplex",
    "affine_dependency",
    "barycentric",
    "beta",
    "beta_from_alpha",
    "canonical_normal",
    "classify",
    "embedding_margin",
    "eta",
    "eta_from_alpha",
    "face_incenter",
    "facet_volumes",
    "greatest_solid_angle",
    "incenter_inradius",
    "induced_affine_map",
    "is_embedded",
    "radon_partition",
    "simplex_volume",
    "solid_angle",
    "vertex_solid_angles",
]


def as_points(points):
    arr = np.array(points, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array of points, got shape {arr.shape}")
    return arr


def normalize(points):
    """Return ``(normalized, center, scale)`` with ``points = center + scale * normalized``."""
    center = points.mean(axis=0)
    shifted = points - center
    scale = math.sqrt(float((shifted ** 2).sum()) / len(points))
    if scale == 0.0:
        raise RankDeficient("all points coincide")
    return shifted / scale, center, scale


def _rank_ratio(mat):
    s = np.linalg.svd(mat, compute_uv=False)
    return s[-1] / s[0] if s[0] > 0 else 0.0


def simplex_volume(points):
    """k-dimensional volume of the k-simplex spanned by ``k + 1`` points in ``R^n``."""
    points = np.asarray(points, dtype=float)
    k = len(points) - 1
    if k == 0:
        return 1.0
    d = points[1:] - points[0]
    if d.shape[0] == d.shape[1]:
        return abs(float(np.linalg.det(d))) / math.factorial(k)
    # QR avoids squaring the conditioning the way a Gram determinant would
    r = np.linalg.qr(d.T, mode="r")
    return abs(float(np.prod(np.diag(r)))) / math.factorial(k)


def canonical_normal(face):
    """Unit normal ``nu`` of the hyperplane through ``n`` points in ``R^n``.

    The sign is fixed by ``det[w1 - w0, ..., w_{n-1} - w0, nu] > 0``, so the
    normal is a function of the ordered face only.
    """
    face = np.asarray(face, dtype=float)
    d = (face[1:] - face[0]).T
    u, _, _ = np.linalg.svd(d, full_matrices=True)
    nu = u[:, -1]
    if np.linalg.det(np.column_stack([d, nu])) < 0:
        nu = -nu
    return nu


def barycentric(point, vertices):
    """Barycentric coordinates of ``point`` in the simplex ``vertices`` (``n + 1`` rows)."""
    vertices = np.asarray(vertices, dtype=float)
    mat = np.vstack([vertices.T, np.ones(len(vertices))])
    rhs = np.append(np.asarray(point, dtype=float), 1.0)
    return np.linalg.solve(mat, rhs)


def facet_volumes(points):
    """Volumes of the ``k + 1`` facets of the k-simplex ``points``, facet ``i`` opposite point ``i``."""
    points = np.asarray(points, dtype=float)
    m = len(points)
    k = m - 2
    if k == 0:
        return np.ones(m)
    idx = np.array([[j for j in range(m) if j != i] for i in range(m)])
    faces = points[idx]
    d = faces[:, 1:] - faces[:, :1]
    r = np.linalg.qr(np.swapaxes(d, 1, 2), mode="r")
    return np.abs(np.prod(np.diagonal(r, axis1=1, axis2=2), axis=1)) / math.factorial(k)


@dataclass(frozen=True, eq=False)
class Simplex:
    """``n + 1`` vertices in ``R^n``; possibly flat, but every ``n`` of them independent."""

    vertices: np.ndarray
    tol: Tolerances = field(default=None, repr=False)

    def __post_init__(self):
        verts = as_points(self.vertices)
        m, n = verts.shape
        if n < 2:
            raise ValueError("simplices of dimension 1 are not supported")
        if m != n + 1:
            raise ValueError(f"an {n}-simplex needs {n + 1} vertices, got {m}")
        tol = resolve(self.tol)
        normed, _, _ = normalize(verts)
        for i in range(m):
            rest = np.delete(normed, i, axis=0)
            if _rank_ratio(rest[1:] - rest[0]) < tol.rank:
                raise InvalidConfiguration(
                    f"vertices other than {i} do not span an (n-1)-simplex")
        verts.flags.writeable = False
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "tol", tol)

    @property
    def n(self):
        return self.vertices.shape[1]

    @property
    def volume(self):
        return simplex_volume(self.vertices)

    def basis(self, base=0):
        """Columns ``v_i - v_base`` for ``i != base``, in vertex order."""
        idx = [i for i in range(self.n + 1) if i != base]
        return (self.vertices[idx] - self.vertices[base]).T

    def edge_lengths(self):
        v = self.vertices
        return np.array([np.linalg.norm(v[i] - v[j])
                         for i, j in combinations(range(len(v)), 2)])


@dataclass(frozen=True, eq=False)
class Configuration:
    """An unlabeled point set tagged with the skeleton it carries.

    ``kind == "K"``: ``n + 1`` points, the (n-2)-skeleton of the n-simplex.
    ``kind == "L"``: ``n + 2`` points, the (n-2)-skeleton of the (n+1)-simplex.
    """

    kind: str
    points: np.ndarray

    def __post_init__(self):
        if self.kind not in ("K", "L"):
            raise ValueError(f"kind must be 'K' or 'L', got {self.kind!r}")
        pts = as_points(self.points)
        m, n = pts.shape
        if n < 2:
            raise ValueError("dimension must be at least 2")
        expected = n + 1 if self.kind == "K" else n + 2
        if m != expected:
            raise ValueError(f"kind {self.kind} in R^{n} needs {expected} points, got {m}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[1]

    def with_points(self, points):
        return Configuration(self.kind, points)

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "points": self.points.tolist()}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        cfg = cls(obj["kind"], obj["points"])
        if "n" in obj and int(obj["n"]) != cfg.n:
            raise ValueError(f"declared n={obj['n']} but points live in R^{cfg.n}")
        return cfg

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)
            fh.write("\n")


@dataclass(frozen=True, eq=False)
class AffineMap:
    """``x -> linear @ x + translation``."""

    linear: np.ndarray
    translation: np.ndarray

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), np.zeros(n))

    @property
    def orientation(self):
        return int(np.sign(np.linalg.det(self.linear)))

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        return points @ self.linear.T + self.translation

    def compose(self, other):
        """``self o other``."""
        return AffineMap(self.linear @ other.linear,
                         self.linear @ other.translation + self.translation)

    def inverse(self):
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.translation)


def affine_map_from_simplices(src, dst):
    """The affine map sending the ``n + 1`` rows of ``src`` to those of ``dst``."""
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    ds = (src[1:] - src[0]).T
    dd = (dst[1:] - dst[0]).T
    lin = np.linalg.solve(ds.T, dd.T).T
    return AffineMap(lin, dst[0] - lin @ src[0])


# ---------------------------------------------------------------------------
# Radon partitions and degeneracy classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RadonResult:
    part1: tuple
    part2: tuple
    coefficients: np.ndarray
    radon_point: np.ndarray


@dataclass(frozen=True)
class NonDegenerate:
    margin: float


@dataclass(frozen=True)
class Hyperplane:
    interior: int
    margin: float


@dataclass(frozen=True)
class Interior:
    vertex: int
    margin: float


@dataclass(frozen=True)
class EdgeFace:
    """``edge = (near, far)`` ordered by distance to the Radon point."""

    edge: tuple
    face: tuple
    radon_point: tuple
    margin: float


@dataclass(frozen=True)
class Boundary:
    vertex: int
    face: tuple
    margin: float


def affine_dependency(points, tol=None):
    """Normalized null vector of the homogeneous coordinate matrix.

    Returns ``(lam, rank_ratio, nullity_ratio)`` where ``lam`` is scaled to
    ``sum |lam| = 2``, ``rank_ratio`` is smallest/largest singular value and
    ``nullity_ratio`` the next-to-smallest/largest one (small values of the
    latter mean the dependency is not unique).
    """
    pts = as_points(points)
    normed, _, _ = normalize(pts)
    m, n = normed.shape
    hom = np.vstack([normed.T, np.ones(m)])
    _, s, vh = np.linalg.svd(hom, full_matrices=True)
    lam = vh[-1].copy()
    lam *= 2.0 / np.abs(lam).sum()
    if m == n + 1:
        ratio = s[-1] / s[0]
        nullity_ratio = s[-2] / s[0]
    else:
        ratio = 0.0
        nullity_ratio = s[-1] / s[0]
    return lam, ratio, nullity_ratio


def _oriented_parts(lam, eps):
    pos = np.flatnonzero(lam > eps)
    neg = np.flatnonzero(lam < -eps)
    flip = len(pos) > len(neg)
    if len(pos) == len(neg):
        nz = np.flatnonzero(np.abs(lam) > eps)
        flip = lam[nz[0]] < 0
    if flip:
        lam = -lam
        pos, neg = neg, pos
    zero = np.flatnonzero(np.abs(lam) <= eps)
    return lam, pos, neg, zero


def radon_partition(points, tol=None):
    """Radon partition of ``n + 2`` points in ``R^n``.

    ``part1`` holds the indices with positive dependency coefficient, oriented
    so that it is the smaller part (ties: the part holding the lowest index).
    Points with a vanishing coefficient are placed in ``part2``.
    """
    tol = resolve(tol)
    pts = as_points(points)
    m, n = pts.shape
    if m != n + 2:
        raise ValueError(f"Radon partition needs {n + 2} points in R^{n}, got {m}")
    lam, _, nullity_ratio = affine_dependency(pts)
    if nullity_ratio < tol.rank:
        raise RankDeficient("affine dependencies form a space of dimension > 1")
    lam, pos, neg, zero = _oriented_parts(lam, tol.geom)
    part2 = tuple(sorted(np.concatenate([neg, zero]).astype(int).tolist()))
    w = lam[pos]
    radon_point = (w @ pts[pos]) / w.sum()
    return RadonResult(tuple(int(i) for i in pos), part2, lam, radon_point)


def _embedding(config, tol):
    """Return ``(embedded, margin, data)`` from the affine-dependency sign pattern.

    Two disjoint faces of the skeleton meet iff the positive and negative
    supports of the (unique) dependency fit in faces of at most ``n - 1``
    vertices each, so the skeleton is embedded iff one side has at least ``n``
    nonzero coefficients.
    """
    pts = config.points
    n = config.n
    lam, ratio, nullity_ratio = affine_dependency(pts)
    if config.kind == "K" and ratio >= tol.rank:
        return True, float(ratio), None
    if nullity_ratio < tol.rank:
        return False, 0.0, None
    lam, pos, neg, zero = _oriented_parts(lam, tol.geom)
    big = max(len(pos), len(neg))
    if config.kind == "K" and len(zero):
        return False, 0.0, (lam, pos, neg, zero)
    nonzero = np.abs(lam[np.abs(lam) > tol.geom])
    margin = float(nonzero.min()) if big >= n else 0.0
    return big >= n, margin, (lam, pos, neg, zero)


def is_embedded(config, tol=None):
    return _embedding(config, resolve(tol))[0]


def embedding_margin(config, tol=None):
    """A positive number for embedded configurations, 0 otherwise."""
    return _embedding(config, resolve(tol))[1]


def classify(config, tol=None):
    """Degeneracy class of an embedded configuration.

    Kind K gives :class:`NonDegenerate` or :class:`Hyperplane`; kind L gives
    :class:`Interior`, :class:`EdgeFace` or :class:`Boundary`.
    """
    tol = resolve(tol)
    embedded, margin, data = _embedding(config, tol)
    if not embedded:
        raise InvalidConfiguration("configuration is not embedded")
    if data is None:
        return NonDegenerate(margin)
    lam, pos, neg, zero = data
    n = config.n
    if config.kind == "K":
        return Hyperplane(int(pos[0]), margin)
    if len(pos) == 1 and len(zero) == 0:
        return Interior(int(pos[0]), margin)
    if len(pos) == 1:
        return Boundary(int(pos[0]), tuple(int(i) for i in neg), margin)
    if len(pos) == 2 and len(neg) == n:
        pts = config.points
        w = lam[pos]
        p = (w @ pts[pos]) / w.sum()
        a, b = (int(i) for i in pos)
        if np.linalg.norm(pts[a] - p) > np.linalg.norm(pts[b] - p):
            a, b = b, a
        return EdgeFace((a, b), tuple(int(i) for i in neg), tuple(p.tolist()), margin)
    raise InvalidConfiguration(f"unexpected dependency sign pattern {len(pos)}/{len(neg)}")


# ---------------------------------------------------------------------------
# Solid angles
# ---------------------------------------------------------------------------

def _planar_angle(u, v):
    cos = u @ v / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(min(1.0, max(-1.0, cos)))


def _triple_angle(a, b, c):
    # Van Oosterom & Strackee
    la, lb, lc = np.linalg.norm(a), np.linalg.norm(b), np.linalg.norm(c)
    num = abs(float(a @ np.cross(b, c)))
    den = la * lb * lc + (a @ b) * lc + (a @ c) * lb + (b @ c) * la
    return 2.0 * math.atan2(num, den)


def solid_angle(apex, rays, tol=None, table_size=None):
    """Spherical volume of the cone ``apex + positive span(rays)``.

    ``rays`` holds ``n`` direction vectors in ``R^n``; ``apex`` only fixes the
    ambient dimension since the value is translation invariant.
    """
    tol = resolve(tol)
    rays = as_points(rays)
    n = rays.shape[1]
    if rays.shape[0] != n or np.shape(apex) != (n,):
        raise ValueError("need n rays and an apex in R^n")
    unit = rays / np.linalg.norm(rays, axis=1, keepdims=True)
    if _rank_ratio(unit) < tol.rank:
        raise DegenerateCone("rays are linearly dependent")
    if n == 2:
        return _planar_angle(unit[0], unit[1])
    if n == 3:
        return _triple_angle(*unit)
    return spherical.sphere_volume(n) * spherical.cone_fraction(unit, table_size)


def vertex_solid_angles(simplex, tol=None, table_size=None):
    """Solid angle at every vertex; a flat simplex gets ``V`` at its interior vertex."""
    if not isinstance(simplex, Simplex):
        simplex = Simplex(simplex, tol)
    tol = simplex.tol
    verts = simplex.vertices
    n = simplex.n
    cls = classify(Configuration("K", verts), tol)
    if isinstance(cls, Hyperplane):
        out = np.zeros(n + 1)
        out[cls.interior] = spherical.half_sphere_volume(n)
        return out
    if n >= 4:
        return spherical.sphere_volume(n) * spherical.simplex_cone_fractions(verts, table_size)
    out = np.empty(n + 1)
    for i in range(n + 1):
        rays = np.delete(verts, i, axis=0) - verts[i]
        unit = rays / np.linalg.norm(rays, axis=1, keepdims=True)
        out[i] = _planar_angle(*unit) if n == 2 else _triple_angle(*unit)
    return out


def greatest_solid_angle(simplex, tol=None, table_size=None):
    """``(alpha, vertex)``: the largest vertex solid angle, ties to the lowest index."""
    angles = vertex_solid_angles(simplex, tol, table_size)
    best = float(angles.max())
    n = len(angles) - 1
    slack = 1e-12 * spherical.half_sphere_volume(n)
    idx = int(np.flatnonzero(angles >= best - slack)[0])
    return best, idx


def eta_from_alpha(alpha, n, clamp=False):
    """``2 alpha / V - 1`` on ``[V/2, V]``."""
    v = spherical.half_sphere_volume(n)
    lo, hi = 0.5 * v, v
    slack = 1e-12 * v
    if not (lo - slack <= alpha <= hi + slack):
        if not clamp:
            raise OutOfRange(f"alpha={alpha} outside [V/2, V] = [{lo}, {hi}]")
    return min(1.0, max(0.0, 2.0 * alpha / v - 1.0))


def beta_from_alpha(alpha, n, clamp=False):
    """``3 - 4 alpha / V`` on ``(-V/2, 3V/4]``, zero at ``alpha = 3V/4``."""
    v = spherical.half_sphere_volume(n)
    lo, hi = -0.5 * v, 0.75 * v
    if not (lo < alpha <= hi + 1e-12 * v):
        if not clamp:
            raise OutOfRange(f"alpha={alpha} outside (-V/2, 3V/4]")
        logging.getLogger(__name__).warning("beta: alpha=%g clamped into (-V/2, 3V/4]", alpha)
        alpha = min(hi, max(alpha, lo + 1e-12 * v))
    return 3.0 - 4.0 * alpha / v


def eta(simplex, clamp=False, tol=None, table_size=None):
    if not isinstance(simplex, Simplex):
        simplex = Simplex(simplex, tol)
    alpha, _ = greatest_solid_angle(simplex, tol, table_size)
    return eta_from_alpha(alpha, simplex.n, clamp)


def beta(simplex, clamp=False, tol=None, table_size=None):
    if not isinstance(simplex, Simplex):
        simplex = Simplex(simplex, tol)
    alpha, _ = greatest_solid_angle(simplex, tol, table_size)
    return beta_from_alpha(alpha, simplex.n, clamp)


def wide_face(config, tol=None, table_size=None):
    """``(apex, face)`` of a kind-K configuration whose greatest solid angle exceeds V/2."""
    tol = resolve(tol)
    simplex = Simplex(config.points, tol)
    alpha, apex = greatest_solid_angle(simplex, tol, table_size)
    if alpha <= 0.5 * spherical.half_sphere_volume(config.n):
        raise NotGated(f"greatest solid angle {alpha} does not exceed V/2")
    face = tuple(i for i in range(config.n + 1) if i != apex)
    return apex, face


# ---------------------------------------------------------------------------
# Affine maps induced by faces, incenters
# ---------------------------------------------------------------------------

def induced_affine_map(face_before, face_after, normal_before, normal_after, tol=None):
    """Affine map sending one face pointwise onto another and unit normal to unit normal."""
    tol = resolve(tol)
    fb = as_points(face_before)
    fa = as_points(face_after)
    nb = np.asarray(normal_before, dtype=float)
    na = np.asarray(normal_after, dtype=float)
    mb = np.column_stack([(fb[1:] - fb[0]).T, nb / np.linalg.norm(nb)])
    ma = np.column_stack([(fa[1:] - fa[0]).T, na / np.linalg.norm(na)])
    if _rank_ratio(mb) < tol.rank or _rank_ratio(ma) < tol.rank:
        raise RankDeficient("face together with its normal does not span R^n")
    lin = ma @ np.linalg.inv(mb)
    if np.linalg.det(lin) <= 0:
        raise ValueError("normals are not orientation-consistent with their faces")
    return AffineMap(lin, fa[0] - lin @ fb[0])


def face_incenter(points):
    """Incenter of a k-simplex (``k + 1`` points) within its own affine hull."""
    points = np.asarray(points, dtype=float)
    k = len(points) - 1
    if k == 0:
        return points[0].copy()
    w = facet_volumes(points)
    return w @ points / w.sum()


def incenter_inradius(simplex, tol=None):
    """``(center, r)`` with ``r = n Vol / Vol(boundary)``."""
    verts = simplex.vertices if isinstance(simplex, Simplex) else as_points(simplex)
    n = verts.shape[1]
    vol = simplex_volume(verts)
    facets = facet_volumes(verts)
    scale = facets.sum()
    if vol <= resolve(tol).rank * scale ** (n / (n - 1)):
        raise DegenerateSimplex("simplex has (near) zero volume")
    return facets @ verts / scale, n * vol / scale
