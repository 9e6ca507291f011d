"""Random and constructed instances used by the self-checks, the CLI and the tests."""
from __future__ import annotations

import numpy as np

from .geometry import Configuration, Simplex, greatest_solid_angle


def rng_from(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_simplex(rng, n):
    """Gaussian vertices, redrawn until reasonably conditioned."""
    while True:
        pts = rng.normal(size=(n + 1, n))
        e = pts[1:] - pts[0]
        s = np.linalg.svd(e, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return pts


def near_flat(rng, pts, lo=0.02, hi=0.5):
    """Pull vertex 0 towards a random point inside the hull of the others."""
    pts = pts.copy()
    n = pts.shape[1]
    g = rng.dirichlet(np.ones(n)) @ pts[1:]
    pts[0] = g + rng.uniform(lo, hi) * (pts[0] - g)
    return pts


def random_k_config(rng, n, flat_fraction=1 / 3):
    pts = random_simplex(rng, n)
    if rng.uniform() < flat_fraction:
        pts = near_flat(rng, pts)
    return Configuration("K", pts)


def random_l_config(rng, n, kind):
    """A kind-L configuration of class ``"I"``, ``"E"`` or ``"B"``."""
    x = random_simplex(rng, n)
    if kind == "I":
        w = rng.dirichlet(np.ones(n + 1))
        return Configuration("L", np.vstack([x, w @ x]))
    if kind == "B":
        w = rng.dirichlet(np.ones(n))
        return Configuration("L", np.vstack([x, w @ x[:n]]))
    if kind == "E":
        face = x[:n]
        p = rng.dirichlet(np.ones(n)) @ face
        direction = rng.normal(size=n)
        a, b = rng.uniform(0.2, 2.0, size=2)
        return Configuration("L", np.vstack([face, p + a * direction, p - b * direction]))
    raise ValueError(f"unknown class {kind!r}")


def pyramid(n, height, base_scale=1.0):
    """Regular base (unit edges times ``base_scale``) centered at the origin, apex on the axis."""
    from .regularize import standard_A, vertices_of

    base = vertices_of(standard_A(n - 1), np.zeros(n - 1)) * base_scale
    pts = np.zeros((n + 1, n))
    pts[:n, : n - 1] = base
    pts[n, n - 1] = height * base_scale
    return pts


def regular_simplex(n):
    from .regularize import standard_A, vertices_of

    return vertices_of(standard_A(n), np.zeros(n))


def skewed_apex_family(n=3, seed=0):
    """``h -> simplex``: a fixed irregular base with the apex over an interior point at height ``h``."""
    rng = rng_from(seed)
    base = rng.normal(size=(n, n - 1))
    foot = rng.dirichlet(np.ones(n)) @ base
    pts = np.zeros((n + 1, n))
    pts[:n, : n - 1] = base

    def member(h):
        out = pts.copy()
        out[n, : n - 1] = foot
        out[n, n - 1] = h
        return out

    return member


def alpha_crossing(member, level, lo=1e-6, hi=1e3, iters=200):
    """Apex height at which the greatest solid angle of ``member(h)`` equals ``level`` (bisection)."""
    def alpha(h):
        return greatest_solid_angle(Simplex(member(h)))[0]

    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if alpha(mid) > level:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * hi:
            break
    return 0.5 * (lo + hi)

