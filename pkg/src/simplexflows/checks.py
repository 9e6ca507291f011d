"""The acceptance suite: one function per criterion, shared by ``selfcheck`` and the tests.

Every check is deterministic given its seed and returns a :class:`CheckResult`.
"""
from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog
from scipy.stats import ortho_group

from . import group, spherical
from .geometry import Configuration, radon_partition, vertex_solid_angles
from .regularize import (
    BimedianBasis,
    basis_swap_B,
    bimedian_basis,
    inradius_flow,
    irregularity_potential,
    mu_nu,
    omega,
    phi,
    regularize_bimedian,
    sheet,
    tetra_from_bimedian,
    vertices_of,
)
from .retract_k import is_pyramid_k, psi_trajectory
from .retract_l import is_pyramid_l, lambda_trajectory, s_param
from .samples import (
    alpha_crossing,
    near_flat,
    random_k_config,
    random_l_config,
    random_simplex,
    rng_from,
    skewed_apex_family,
)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f} s)"


def _timed(number, name, limit=None):
    def wrap(fn):
        @functools.wraps(fn)
        def run(seed=0, **kwargs):
            start = time.perf_counter()
            passed, detail = fn(rng_from(seed), **kwargs)
            elapsed = time.perf_counter() - start
            if limit is not None and elapsed >= limit:
                passed = False
                detail += f"; over the {limit:g} s budget"
            return CheckResult(number, name, bool(passed), detail, elapsed)

        run.number = number
        run.title = name
        return run

    return wrap


def edge_spread(vertices):
    v = np.asarray(vertices)
    lengths = np.array([np.linalg.norm(v[i] - v[j]) for i, j in combinations(range(len(v)), 2)])
    return float((lengths.max() - lengths.min()) / lengths.mean())


@_timed(1, "orthogonalization path is right O(n)-equivariant", limit=5.0)
def check_phi_equivariance(rng, trials=1000):
    worst = 0.0
    for k in range(trials):
        n = 2 + k % 5
        x = rng.normal(size=(n, n))
        q = ortho_group.rvs(n, random_state=rng)
        t = rng.uniform()
        err = np.linalg.norm(phi(x @ q, t) - phi(x, t) @ q) / np.linalg.norm(x)
        worst = max(worst, err)
    return worst <= 1e-9, f"max relative error {worst:.2e} over {trials} trials"


@_timed(2, "simplex regularization is label equivariant and ends regular")
def check_omega(rng, trials=1000):
    worst_eq = worst_spread = 0.0
    for k in range(trials):
        n = 2 + k % 5
        x = rng.normal(size=(n, n))
        i = int(rng.integers(1, n + 1))
        t = rng.uniform()
        b = basis_swap_B(n, i)
        worst_eq = max(worst_eq, np.linalg.norm(omega(x @ b, t) - omega(x, t) @ b)
                       / np.linalg.norm(x))
        end = vertices_of(omega(x, 1.0), np.zeros(n))
        worst_spread = max(worst_spread, edge_spread(end))
    ok = worst_eq <= 1e-9 and worst_spread < 1e-8
    return ok, f"equivariance error {worst_eq:.2e}, terminal edge spread {worst_spread:.2e}"


def _needle(n, eps):
    """Two small skew end faces a unit apart: every vertex cone is a thin wedge."""
    pts = np.zeros((n + 1, n))
    half = (n + 1) // 2
    pts[half:, 0] = 1.0
    axis = 1
    for i in list(range(1, half)) + list(range(half + 1, n + 1)):
        pts[i, axis] += eps
        axis += 1
    return pts


@_timed(3, "vertex solid angles sum to at most half the sphere")
def check_solid_angle_bound(rng, trials=1000, trials_4=100):
    details = []
    ok = True
    for n in (2, 3):
        vol = spherical.sphere_volume(n)
        lo, hi, worst_eq = math.inf, -math.inf, 0.0
        for _ in range(trials):
            total = float(vertex_solid_angles(random_simplex(rng, n)).sum())
            lo, hi = min(lo, total), max(hi, total)
            if n == 2:
                worst_eq = max(worst_eq, abs(total - math.pi))
        ok &= lo > 0 and 2 * hi <= vol + 1e-6 and (n != 2 or worst_eq <= 1e-9)
        details.append(f"n={n}: 2*sum in [{2 * lo:.4f}, {2 * hi:.4f}] vs {vol:.4f}")
    vol4 = spherical.sphere_volume(4)
    hi4 = max(float(vertex_solid_angles(random_simplex(rng, 4)).sum()) for _ in range(trials_4))
    ok &= 2 * hi4 <= vol4 + 1e-2
    details.append(f"n=4: max 2*sum {2 * hi4:.4f} vs {vol4:.4f}")
    for n in (3, 4):
        v = spherical.half_sphere_volume(n)
        flat = near_flat(rng, random_simplex(rng, n), 1e-4, 1e-4)
        top = float(vertex_solid_angles(flat).sum())
        bottom = float(vertex_solid_angles(_needle(n, 1e-3)).sum())
        witness = abs(top - v) <= 0.02 * v and 0 < bottom <= 0.02 * v
        ok &= witness
        details.append(f"n={n} witnesses {top / v:.4f} V and {bottom / v:.1e} V")
    return ok, "; ".join(details)


@_timed(4, "regular basis entries satisfy the unit-edge constraints")
def check_mu_nu(rng):
    worst = 0.0
    for n in range(2, 13):
        mu, nu = mu_nu(n)
        worst = max(worst, abs(mu * mu + (n - 1) * nu * nu - 1), abs(2 * (mu - nu) ** 2 - 1))
    return worst <= 1e-12, f"max residual {worst:.1e} for n = 2..12"


@_timed(5, "retractions end on pyramids and stay embedded", limit=60.0)
def check_retraction_endpoints(rng, k_count=500, l_count=500):
    k_fail = l_fail = 0
    for idx in range(k_count):
        n = 3 if idx < k_count // 2 else 4
        traj = psi_trajectory(random_k_config(rng, n), samples=64)
        k_fail += not is_pyramid_k(traj.final, 1e-6)
    for idx in range(l_count):
        kind = "IEB"[idx % 3]
        traj = lambda_trajectory(random_l_config(rng, 3, kind), samples=96)
        l_fail += not is_pyramid_l(traj.final, 1e-6)
    detail = (f"K: {k_count - k_fail}/{k_count} pyramids (64 samples), "
              f"L: {l_count - l_fail}/{l_count} (96 samples), all samples embedded")
    return k_fail == 0 and l_fail == 0, detail


def _discrepancy(a, b):
    return max(float(np.abs(x - y).max()) for x, y in zip(a.frames, b.frames))


def _k_gluing(deltas, seed):
    member = skewed_apex_family(3, seed)
    v = spherical.half_sphere_volume(3)
    gaps = []
    for delta in deltas:
        h_plus = alpha_crossing(member, 0.5 * v + delta * v)
        h_minus = alpha_crossing(member, 0.5 * v - delta * v)
        above = psi_trajectory(Configuration("K", member(h_plus)), 64)
        below = psi_trajectory(Configuration("K", member(h_minus)), 64)
        gaps.append(_discrepancy(above, below))
    return gaps


def _l_gluing(deltas, rng):
    x = random_simplex(rng, 3)
    w = rng.dirichlet(np.ones(3))
    on_face = w @ x[:3]
    normal = on_face - x[3]
    gaps = []
    for delta in deltas:
        inside = Configuration("L", np.vstack([x, on_face - delta * normal]))
        outside = Configuration("L", np.vstack([x, on_face + delta * normal]))
        gaps.append(_discrepancy(lambda_trajectory(inside, 96), lambda_trajectory(outside, 96)))
    return gaps


@_timed(6, "branches glue continuously across the gating boundaries")
def check_gluing(rng, deltas=(1e-2, 1e-3, 1e-4)):
    k_gaps = _k_gluing(deltas, int(rng.integers(1 << 31)))
    l_gaps = _l_gluing(deltas, rng)
    ok = all(a > b for a, b in zip(k_gaps, k_gaps[1:])) and \
        all(a > b for a, b in zip(l_gaps, l_gaps[1:]))
    fmt = ", ".join
    return ok, (f"K gaps [{fmt(f'{g:.1e}' for g in k_gaps)}], "
                f"L gaps [{fmt(f'{g:.1e}' for g in l_gaps)}] for deltas {list(deltas)}")


@_timed(7, "stage-one parameter boundary identities")
def check_s_boundary(rng, grid=100):
    worst = 0.0
    for n in (2, 3, 4, 5):
        qs = np.linspace(0.0, 1.0, grid + 1)[1:]
        for q in qs:
            worst = max(worst, abs(s_param(0.0, q, n) - 1.0))
            worst = max(worst, abs(s_param((1.0 - q) / n, q, n) - q))
        ms = np.linspace(0.0, 1.0 / n, grid + 1)[1:]
        for m in ms:
            worst = max(worst, abs(s_param(m, 0.0, n)))
        for q in np.linspace(0.0, 1.0, grid):
            for frac in np.linspace(0.0, 1.0, grid):
                m = frac * (1.0 - q) / n
                if m == 0.0 and q == 0.0:
                    continue
                s = s_param(m, q, n)
                if not (q - 1e-12 <= s <= 1.0 + 1e-12):
                    worst = max(worst, 1.0)
    return worst <= 1e-12, f"max deviation {worst:.1e} on {grid}x{grid} grids, n = 2..5"


@_timed(8, "inradius flow regularizes at fixed volume")
def check_inradius_flow(rng, trials=100):
    worst_res = worst_spread = worst_sim = 0.0
    monotone = True
    for _ in range(trials):
        x = random_simplex(rng, 3)
        res = inradius_flow(x)
        monotone &= all(b <= a for a, b in zip(res.potentials, res.potentials[1:]))
        worst_res = max(worst_res, res.residual)
        worst_spread = max(worst_spread, edge_spread(res.final))
        q = ortho_group.rvs(3, random_state=rng)
        y = rng.uniform(0.1, 10.0) * x @ q.T + rng.normal(size=3)
        p0 = irregularity_potential(x)
        worst_sim = max(worst_sim, abs(p0 - irregularity_potential(y)) / p0)
    ok = monotone and worst_res < 1e-6 and worst_spread < 1e-4 and worst_sim <= 1e-10
    return ok, (f"monotone={monotone}, residual {worst_res:.1e}, edge spread "
                f"{worst_spread:.1e}, relative similarity drift {worst_sim:.1e}")


@_timed(9, "bimedian regularization and the sheet double cover")
def check_bimedian(rng, trials=100):
    worst_spread = worst_trip = 0.0
    exact = True
    for _ in range(trials):
        x = random_simplex(rng, 3)
        worst_spread = max(worst_spread, edge_spread(regularize_bimedian(x, 1.0)))
        b = bimedian_basis(x)
        back = tetra_from_bimedian(b, sheet(x))
        worst_trip = max(worst_trip, float(np.abs(back - x).max()))
        centered = BimedianBasis(b.matrix)
        plus, minus = tetra_from_bimedian(centered, 1), tetra_from_bimedian(centered, -1)
        exact &= bool(np.array_equal(plus, -minus))
    ok = worst_spread < 1e-8 and worst_trip < 1e-10 and exact
    return ok, (f"edge spread {worst_spread:.1e}, round trip {worst_trip:.1e}, "
                f"sheets differ by -I exactly: {exact}")


@_timed(10, "fundamental group relations, action and permutation image", limit=2.0)
def check_group(rng):
    checks = group.verify_all()
    failed = [c.label for c in checks if not c.passed]
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks"
    if failed:
        detail += "; failed: " + ", ".join(failed[:5])
    return not failed, detail


def _hulls_meet(a, b):
    # feasibility of sum(l a) = sum(m b), sum l = sum m = 1, l, m >= 0
    na, nb = len(a), len(b)
    n = a.shape[1]
    eq = np.zeros((n + 2, na + nb))
    eq[:n, :na] = a.T
    eq[:n, na:] = -b.T
    eq[n, :na] = 1.0
    eq[n + 1, na:] = 1.0
    rhs = np.zeros(n + 2)
    rhs[n:] = 1.0
    res = linprog(np.zeros(na + nb), A_eq=eq, b_eq=rhs, bounds=(0, None), method="highs")
    return res.status == 0


def brute_force_radon(points):
    """All splits ``{A, B}`` of the points whose convex hulls intersect (linear programming)."""
    m = len(points)
    found = []
    for size in range(1, m // 2 + 1):
        for a in combinations(range(m), size):
            b = tuple(i for i in range(m) if i not in a)
            if size == m - size and 0 not in a:
                continue
            if _hulls_meet(points[list(a)], points[list(b)]):
                found.append(frozenset([a, b]))
    return found


@_timed(11, "Radon partitions agree with a brute-force oracle")
def check_radon(rng, trials=200):
    agree = 0
    for k in range(trials):
        n = 2 + k % 3
        pts = rng.normal(size=(n + 2, n))
        res = radon_partition(pts)
        found = brute_force_radon(pts)
        agree += len(found) == 1 and found[0] == frozenset([res.part1, res.part2])
    return agree == trials, f"{agree}/{trials} point sets agree, n = 2..4"


ALL_CHECKS = [
    check_phi_equivariance,
    check_omega,
    check_solid_angle_bound,
    check_mu_nu,
    check_retraction_endpoints,
    check_gluing,
    check_s_boundary,
    check_inradius_flow,
    check_bimedian,
    check_group,
    check_radon,
]


def run_all(seed=0, only=None):
    results = []
    for check in ALL_CHECKS:
        if only is not None and check.number not in only:
            continue
        results.append(check(seed))
    return results
