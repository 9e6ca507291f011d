"""Unit-sphere volumes and the fixed quasi-random point tables used for solid angles.

Solid angles in dimension ``n >= 4`` are estimated by counting points of a
scrambled Sobol sequence, pushed through the Gaussian inverse CDF and
normalized onto ``S^{n-1}``.  The table is seeded and versioned, so every
estimate is a deterministic function of its input.
"""
from __future__ import annotations

import math
import os
import threading

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from . import _accel

TABLE_VERSION = "sobol-gauss-v1"
TABLE_SEED = 20240917
DEFAULT_TABLE_SIZE = 1 << 20
SIZE_ENV = "SIMPLEXFLOWS_SOBOL_SIZE"

_tables: dict[tuple[int, int], np.ndarray] = {}
_lock = threading.Lock()


def sphere_volume(n):
    """(n-1)-dimensional volume of the unit sphere ``S^{n-1}`` in ``R^n``."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def half_sphere_volume(n):
    """``V = Vol(S^{n-1}) / 2``, the supremum of the greatest solid angle."""
    return 0.5 * sphere_volume(n)


def ball_volume(n):
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def table_size():
    raw = os.environ.get(SIZE_ENV)
    if not raw:
        return DEFAULT_TABLE_SIZE
    size = int(raw)
    if size < 2:
        raise ValueError(f"{SIZE_ENV} must be at least 2")
    return size


def sphere_table(n, size=None):
    """Return the cached ``(N, n)`` table of points on ``S^{n-1}``.

    ``N`` is ``size`` rounded up to a power of two (Sobol balance property).
    The array is read-only and shared.
    """
    size = table_size() if size is None else int(size)
    m = max(1, math.ceil(math.log2(size)))
    key = (n, m)
    table = _tables.get(key)
    if table is not None:
        return table
    with _lock:
        table = _tables.get(key)
        if table is None:
            sampler = qmc.Sobol(d=n, scramble=True, seed=TABLE_SEED + n)
            u = sampler.random_base2(m)
            np.clip(u, 1e-15, 1.0 - 1e-15, out=u)
            g = ndtri(u)
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            table = np.ascontiguousarray(g)
            table.flags.writeable = False
            _tables[key] = table
    return table


def cone_fraction(rays, size=None):
    """Fraction of ``S^{n-1}`` inside the positive span of the rows of ``rays``."""
    rays = np.asarray(rays, dtype=float)
    n = rays.shape[1]
    pts = sphere_table(n, size)
    inv = np.ascontiguousarray(np.linalg.inv(rays.T))
    pos, neg = _accel.cone_counts(inv, pts)
    return (pos + neg) / (2.0 * len(pts))


def simplex_cone_fractions(vertices, size=None):
    """Sphere fractions of all ``n + 1`` vertex cones of a simplex in one pass."""
    vertices = np.asarray(vertices, dtype=float)
    n = vertices.shape[1]
    pts = sphere_table(n, size)
    edges = (vertices[1:] - vertices[0]).T
    inv = np.ascontiguousarray(np.linalg.inv(edges))
    counts = _accel.simplex_cone_counts(inv, pts)
    return np.asarray(counts, dtype=float) / (2.0 * len(pts))
