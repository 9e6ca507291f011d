"""Löwdin orthogonalization, the symmetric-group-equivariant simplex regularization,
bimedian regularization of tetrahedra and the fixed-volume inradius flow.

A simplex basis is an ``(n, n)`` matrix whose columns are the edge vectors
``v_i - v_0``; simplices themselves are ``(n + 1, n)`` vertex arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import spherical
from .config import resolve
from .errors import DimensionError, NonConvergence, SingularInput
from .geometry import (
    Simplex,
    as_points,
    face_incenter,
    facet_volumes,
    incenter_inradius,
    simplex_volume,
)

EIGEN_FLOOR = 1e-14


# ---------------------------------------------------------------------------
# Löwdin path and the regular-simplex retraction
# ---------------------------------------------------------------------------

def inv_sqrt_gram(x):
    """``(x^T x)^{-1/2}`` via a symmetric eigendecomposition."""
    x = np.asarray(x, dtype=float)
    w, v = np.linalg.eigh(x.T @ x)
    if w[-1] <= 0 or w[0] < EIGEN_FLOOR * w[-1]:
        raise SingularInput("Gram matrix is singular to working precision")
    return (v / np.sqrt(w)) @ v.T


def polar_factor(x):
    """Nearest orthogonal matrix ``x (x^T x)^{-1/2}``.

    Evaluated as ``U V^T`` from the SVD ``x = U S V^T``, which equals the
    Gram-matrix expression but loses accuracy like ``cond(x)`` rather than
    ``cond(x)^2``.  The same relative floor applies to the squared singular
    values as to the Gram eigenvalues.
    """
    x = np.asarray(x, dtype=float)
    u, s, vt = np.linalg.svd(x)
    if s[0] <= 0 or s[-1] ** 2 < EIGEN_FLOOR * s[0] ** 2:
        raise SingularInput("matrix is singular to working precision")
    return u @ vt


def phi(x, t):
    """Straight-line path ``(1 - t) x + t x (x^T x)^{-1/2}`` from ``x`` into ``O(n)``."""
    x = np.asarray(x, dtype=float)
    return (1.0 - t) * x + t * polar_factor(x)


def mu_nu(n):
    r = math.sqrt(n + 1.0)
    return (n + r - 1.0) / (math.sqrt(2.0) * n), (r - 1.0) / (math.sqrt(2.0) * n)


@lru_cache(maxsize=None)
def _standard_A(n):
    mu, nu = mu_nu(n)
    a = np.full((n, n), nu)
    np.fill_diagonal(a, mu)
    a.flags.writeable = False
    return a, np.linalg.inv(a)


def standard_A(n):
    """Symmetric basis of a unit-edge regular simplex with one vertex at the origin."""
    return _standard_A(n)[0].copy()


def basis_swap_B(n, i):
    """Identity with row ``i`` (1-based) replaced by ``[-1, ..., -1]``.

    Right multiplication re-bases a simplex basis at vertex ``i``; the ``B_i``
    realize the transposition ``(0 i)`` of ``S_{n+1}``.
    """
    if not 1 <= i <= n:
        raise ValueError(f"i must lie in 1..{n}")
    b = np.eye(n)
    b[i - 1, :] = -1.0
    return b


def omega(x, t):
    """``Phi_t(x A^{-1}) A``: a vertex-label-equivariant path to a unit regular simplex."""
    x = np.asarray(x, dtype=float)
    a, a_inv = _standard_A(x.shape[0])
    return phi(x @ a_inv, t) @ a


def omega_endpoint(x):
    """``omega(x, 1)``; vertices of ``omega(x, t)`` interpolate linearly towards it."""
    x = np.asarray(x, dtype=float)
    a, a_inv = _standard_A(x.shape[0])
    return polar_factor(x @ a_inv) @ a


def basis_of(vertices, base=0):
    vertices = np.asarray(vertices, dtype=float)
    idx = [i for i in range(len(vertices)) if i != base]
    return (vertices[idx] - vertices[base]).T


def vertices_of(basis, centroid):
    """Vertices ``{0} + columns`` translated so their centroid is ``centroid``."""
    verts = np.vstack([np.zeros(basis.shape[0]), basis.T])
    return verts - verts.mean(axis=0) + centroid


class OmegaPath:
    """Precomputed regularization of a labeled simplex, centroid held fixed.

    Vertices travel on straight lines, so ``at(t)`` is a convex combination of
    the start and end vertex arrays.
    """

    def __init__(self, vertices):
        vertices = as_points(vertices)
        self.start = vertices
        centroid = vertices.mean(axis=0)
        self.end = vertices_of(omega_endpoint(basis_of(vertices)), centroid)

    def at(self, t):
        return (1.0 - t) * self.start + t * self.end


def regularize_simplex(vertices, t):
    """Apply ``omega`` to a vertex array (base vertex 0, centroid fixed)."""
    return OmegaPath(vertices).at(t)


# ---------------------------------------------------------------------------
# Bimedian bases (tetrahedra only)
# ---------------------------------------------------------------------------

_SIGNS = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)


@dataclass(frozen=True, eq=False)
class BimedianBasis:
    """Half-bimedians ``m(v0, vk) - barycenter`` as the columns of ``matrix``."""

    matrix: np.ndarray
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def midpoints(self):
        """The six edge midpoints, as (start, end) pairs of each bimedian."""
        b = self.matrix.T
        return [(self.center + v, self.center - v) for v in b]


def _tetra_vertices(tetra):
    verts = tetra.vertices if isinstance(tetra, Simplex) else as_points(tetra)
    if verts.shape != (4, 3):
        raise DimensionError("bimedian bases exist for tetrahedra in R^3 only")
    return verts


def bimedian_basis(tetra):
    verts = _tetra_vertices(tetra)
    g = verts.mean(axis=0)
    mids = 0.5 * (verts[0] + verts[1:])
    return BimedianBasis((mids - g).T, g)


def sheet(tetra):
    """Which of the two tetrahedra over its bimedian basis ``tetra`` is: ``+1`` or ``-1``."""
    verts = _tetra_vertices(tetra)
    b = bimedian_basis(verts)
    orient = np.sign(np.linalg.det((verts[1:] - verts[0]).T))
    ref = np.sign(np.linalg.det(b.matrix) * np.linalg.det((_SIGNS[1:] - _SIGNS[0]).T))
    return int(orient * ref)


def tetra_from_bimedian(b, sheet=1):
    """Vertices ``center + sheet * (+-b1 +- b2 +- b3)`` with an even number of minus signs."""
    if sheet not in (1, -1):
        raise ValueError("sheet must be +1 or -1")
    mat = b.matrix if isinstance(b, BimedianBasis) else np.asarray(b, dtype=float)
    center = b.center if isinstance(b, BimedianBasis) else np.zeros(3)
    if mat.shape != (3, 3):
        raise DimensionError("bimedian bases are 3 x 3")
    return center + sheet * (_SIGNS @ mat.T)


def regularize_bimedian(tetra, t):
    """Löwdin-orthogonalize the bimedian basis and rebuild on the same sheet."""
    verts = _tetra_vertices(tetra)
    b = bimedian_basis(verts)
    s = sheet(verts)
    return tetra_from_bimedian(BimedianBasis(phi(b.matrix, t), b.center), s)


# ---------------------------------------------------------------------------
# Inradius flow
# ---------------------------------------------------------------------------

def boundary_volume(vertices):
    return float(facet_volumes(vertices).sum())


def irregularity_potential(simplex):
    """``Vol(x) / Vol(insphere(x))``; similarity invariant, minimal on regular simplices."""
    verts = simplex.vertices if isinstance(simplex, Simplex) else as_points(simplex)
    n = verts.shape[1]
    vol = simplex_volume(verts)
    r = n * vol / boundary_volume(verts)
    return vol / (spherical.ball_volume(n) * r ** n)


def _facet_volume_grad(face):
    """Gradient of the (n-1)-volume of ``face`` (``n`` points) w.r.t. each point."""
    d = (face[1:] - face[0]).T
    gram = d.T @ d
    k = d.shape[1]
    vol = math.sqrt(max(np.linalg.det(gram), 0.0)) / math.factorial(k)
    gd = vol * d @ np.linalg.inv(gram)
    out = np.empty_like(face)
    out[1:] = gd.T
    out[0] = -gd.sum(axis=1)
    return out


def boundary_volume_grad(vertices):
    g = np.zeros_like(vertices)
    idx = np.arange(len(vertices))
    for i in idx:
        rest = idx != i
        g[rest] += _facet_volume_grad(vertices[rest])
    return g


def volume_grad(vertices):
    e = (vertices[1:] - vertices[0]).T
    n = e.shape[0]
    det = np.linalg.det(e)
    ge = (abs(det) / math.factorial(n)) * np.linalg.inv(e).T * np.sign(det)
    out = np.empty_like(vertices)
    out[1:] = ge.T
    out[0] = -ge.sum(axis=1)
    return out


def incenter_residual(vertices):
    """Max distance from a vertex's foot on its opposite facet to that facet's incenter.

    Scaled by the mean edge length.
    """
    vertices = np.asarray(vertices, dtype=float)
    m = len(vertices)
    worst = 0.0
    for i in range(m):
        face = np.delete(vertices, i, axis=0)
        d = (face[1:] - face[0]).T
        coef, *_ = np.linalg.lstsq(d, vertices[i] - face[0], rcond=None)
        foot = face[0] + d @ coef
        worst = max(worst, float(np.linalg.norm(foot - face_incenter(face))))
    edges = [np.linalg.norm(vertices[i] - vertices[j]) for i in range(m) for j in range(i)]
    return worst / float(np.mean(edges))


@dataclass
class FlowResult:
    """Accepted iterates of the inradius flow (incenter at the origin)."""

    frames: list
    potentials: list
    residual: float
    converged: bool
    iterations: int

    @property
    def final(self):
        return self.frames[-1]


def inradius_flow(simplex, step=1e-2, max_iters=20000, tol=None, shrink=0.5,
                  grow=2.0, armijo=1e-4, raise_on_failure=True):
    """Descend boundary volume at fixed volume until every vertex sits over its facet's incenter.

    Each trial step follows the projected negative gradient, restores the
    volume by uniform scaling about the centroid, and is accepted under an
    Armijo condition on boundary volume (the potential is then checked to
    not increase).  The step shrinks by ``shrink`` on rejection and grows by
    ``grow`` after an acceptance.  The incenter is kept at the origin.
    """
    tol = resolve(tol)
    verts = simplex.vertices if isinstance(simplex, Simplex) else as_points(simplex)
    n = verts.shape[1]
    scale = float(np.mean([np.linalg.norm(verts[i] - verts[j])
                           for i in range(n + 1) for j in range(i)]))
    x = verts / scale
    vol0 = simplex_volume(x)

    def recenter(y):
        c, _ = incenter_inradius(y, tol)
        return y - c

    x = recenter(x)
    frames = [x * scale]
    pots = [irregularity_potential(x)]
    surf = boundary_volume(x)
    residual = incenter_residual(x)
    alpha = step
    it = 0
    while residual >= tol.flow and it < max_iters:
        it += 1
        gs = boundary_volume_grad(x)
        gv = volume_grad(x)
        d = -(gs - (np.sum(gs * gv) / np.sum(gv * gv)) * gv)
        dd = float(np.sum(d * d))
        if dd == 0.0:
            break
        accepted = False
        while alpha > 1e-18:
            y = x + alpha * d
            c = y.mean(axis=0)
            vol = simplex_volume(y)
            if vol > 0:
                y = c + (y - c) * (vol0 / vol) ** (1.0 / n)
                s_new = boundary_volume(y)
                if s_new <= surf - armijo * alpha * dd:
                    p_new = irregularity_potential(y)
                    if p_new <= pots[-1]:
                        accepted = True
                        break
            alpha *= shrink
        if not accepted:
            break
        x = recenter(y)
        surf = boundary_volume(x)
        frames.append(x * scale)
        pots.append(irregularity_potential(x))
        residual = incenter_residual(x)
        alpha = min(alpha * grow, 1.0)
    converged = residual < tol.flow
    result = FlowResult(frames, pots, residual, converged, it)
    if not converged and raise_on_failure:
        raise NonConvergence(
            f"inradius flow stopped after {it} iterations with residual {residual:.3e}",
            potential=pots[-1], residual=residual)
    return result
