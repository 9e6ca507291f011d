import numpy as np
import pytest
from hypothesis import given, strategies as st

from simplexflows.errors import DomainError, InvalidConfiguration
from simplexflows.geometry import Configuration, is_embedded
from simplexflows.retract_k import regular_height
from simplexflows.retract_l import (
    is_pyramid_l,
    lambda_,
    lambda_trajectory,
    plan_lambda,
    pyramid_l_decomposition,
    s_param,
    stage1_params,
    step1,
    step2,
    step3,
)
from simplexflows.samples import random_l_config, random_simplex, regular_simplex

from conftest import random_rotation

# frozen with mpmath at 30 digits
S_N3_Q04_M01 = 0.5060660171779821
S_N2_Q075_M01 = 0.7792401773821287


def L(points):
    return Configuration("L", np.asarray(points, dtype=float))


# --- stage-one parameter ---------------------------------------------------------------

def test_s_param_examples():
    assert s_param(0.0, 0.5) == 1.0
    assert s_param(0.1, 0.0) == 0.0
    assert s_param(0.2, 0.4, 3) == pytest.approx(0.4, abs=1e-15)
    assert s_param(0.1, 0.4, 3) == pytest.approx(S_N3_Q04_M01, abs=1e-15)
    assert s_param(0.1, 0.75, 2) == pytest.approx(S_N2_Q075_M01, abs=1e-15)
    assert s_param(0.0, 1.0) == 1.0


@pytest.mark.parametrize("m, q, n", [(0.0, 0.0, 3), (0.5, 0.5, 3), (0.1, -0.1, 3),
                                     (-0.1, 0.5, 3), (0.0, 1.5, 3), (0.3, 0.5, 2)])
def test_s_param_domain(m, q, n):
    with pytest.raises(DomainError):
        s_param(m, q, n)


@given(st.integers(2, 6), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_s_param_bounds_and_monotone(n, q, f1, f2):
    lo, hi = sorted((f1, f2))
    m1, m2 = lo * (1 - q) / n, hi * (1 - q) / n
    if m1 == 0.0 and q == 0.0:
        return
    s1, s2 = s_param(m1, q, n), s_param(m2, q, n)
    assert q - 1e-12 <= s2 <= s1 <= 1.0 + 1e-12


# --- stage one -----------------------------------------------------------------------------

def test_interior_point_on_centroid_segment_is_fixed(rng):
    x = random_simplex(rng, 3)
    c = x.mean(axis=0)
    d = x[:3].mean(axis=0)
    v = 0.3 * c + 0.7 * d
    cfg = L(np.vstack([x, v]))
    plan = stage1_params(cfg)
    assert plan.kind == "I" and plan.apex == 3 and plan.face == (0, 1, 2)
    assert plan.params.q == pytest.approx(0.3, abs=1e-12)
    assert plan.params.s == pytest.approx(0.3, abs=1e-9)
    np.testing.assert_allclose(step1(cfg, 1.0).points, cfg.points, atol=1e-9)


def test_interior_barycenter_goes_nowhere(rng):
    x = random_simplex(rng, 3)
    cfg = L(np.vstack([x, x.mean(axis=0)]))
    np.testing.assert_allclose(step1(cfg, 1.0).points, cfg.points, atol=1e-12)


def _edge_crossing(rng):
    cfg = random_l_config(rng, 3, "E")
    plan = stage1_params(cfg)
    assert plan.kind == "E"
    return cfg, plan


def test_edge_crossing_moves_to_face_barycenter(rng):
    cfg, plan = _edge_crossing(rng)
    pts = cfg.points
    l1, l2 = plan.params.l1, plan.params.l2
    assert l1 <= l2
    end = step1(cfg, 1.0).points
    d = pts[list(plan.face)].mean(axis=0)
    crossing = (l2 * end[plan.mover] + l1 * end[plan.far]) / (l1 + l2)
    np.testing.assert_allclose(crossing, d, atol=1e-10)
    p = (l2 * pts[plan.mover] + l1 * pts[plan.far]) / (l1 + l2)
    r = l1 / l2
    assert np.linalg.norm(end[plan.far] - pts[plan.far]) <= r * np.linalg.norm(d - p) + 1e-12
    # the face is untouched
    np.testing.assert_array_equal(end[list(plan.face)], pts[list(plan.face)])


def test_boundary_point_slides_to_barycenter(rng):
    cfg = random_l_config(rng, 3, "B")
    plan = stage1_params(cfg)
    assert plan.kind == "B" and plan.mover == 4
    end = step1(cfg, 1.0).points
    np.testing.assert_allclose(end[4], cfg.points[list(plan.face)].mean(axis=0), atol=1e-12)


# --- stages two and three -------------------------------------------------------------------

def test_stage_two_keeps_edge_face_fixed(rng):
    cfg, plan = _edge_crossing(rng)
    mid = step1(cfg, 1.0)
    for tau in (0.3, 0.7, 1.0):
        out = step2(mid, tau).points
        np.testing.assert_allclose(out[list(plan.face)], mid.points[list(plan.face)], atol=1e-10)


def test_carrier_is_regular_at_the_end(rng):
    cfg = random_l_config(rng, 3, "I")
    path = plan_lambda(cfg)
    ids = [path.plan.apex] + list(path.plan.face)
    np.testing.assert_allclose(path.stage(2, 0.0)[ids], path.first_end[ids], atol=1e-12)
    y = path.at(1.0)[ids]
    edges = [np.linalg.norm(y[i] - y[j]) for i in range(4) for j in range(i)]
    assert np.ptp(edges) < 1e-9 * np.mean(edges)


def test_stage_three_identity_at_zero(rng):
    cfg = random_l_config(rng, 3, "B")
    np.testing.assert_allclose(step3(cfg, 0.0).points, cfg.points, atol=1e-12)


# --- the whole path ----------------------------------------------------------------------------

def test_membership_examples(rng):
    x = regular_simplex(3)
    assert is_pyramid_l(np.vstack([x, x.mean(axis=0)]))
    glued = x[3] - 2 * (x[3] - x[:3].mean(axis=0))
    d = pyramid_l_decomposition(np.vstack([x, glued]))
    # symmetric: either tetrahedron can serve as the regular simplex
    assert d is not None and d.apex in (3, 4) and d.face == (0, 1, 2)
    assert d.height == pytest.approx(-regular_height(3), abs=1e-12)
    too_far = x[3] - 2.5 * (x[3] - x[:3].mean(axis=0))
    assert not is_pyramid_l(np.vstack([x, too_far]))
    assert not is_pyramid_l(random_l_config(rng, 3, "I"))


@pytest.mark.parametrize("kind", "IEB")
def test_endpoint_is_doubled_pyramid(kind, rng):
    for _ in range(5):
        cfg = random_l_config(rng, 3, kind)
        traj = lambda_trajectory(cfg, 24)
        assert is_pyramid_l(traj.final)
        np.testing.assert_allclose(traj.frames[0], cfg.points, atol=1e-12)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from("IEB"))
def test_path_continuous_at_stage_changes(seed, kind):
    cfg = random_l_config(np.random.default_rng(seed), 3, kind)
    path = plan_lambda(cfg)
    for t in (1 / 3, 2 / 3):
        np.testing.assert_allclose(path.at(t), path.at(t + 1e-12), atol=1e-8)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from("IEB"), st.sampled_from([0.2, 0.5, 0.9, 1.0]))
def test_isometry_equivariance(seed, kind, t):
    rng = np.random.default_rng(seed)
    cfg = random_l_config(rng, 3, kind)
    r = random_rotation(rng, 3)
    shift = rng.normal(size=3)
    lhs = lambda_(L(cfg.points @ r.T + shift), t).points
    rhs = lambda_(cfg, t).points @ r.T + shift
    np.testing.assert_allclose(lhs, rhs, atol=1e-8 * (1 + np.abs(rhs).max()))


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from("IB"))
def test_label_equivariance(seed, kind):
    rng = np.random.default_rng(seed)
    cfg = random_l_config(rng, 3, kind)
    perm = rng.permutation(5)
    lhs = lambda_(L(cfg.points[perm]), 1.0).points
    rhs = lambda_(cfg, 1.0).points[perm]
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_stage_selection(rng):
    cfg = random_l_config(rng, 3, "I")
    path = plan_lambda(cfg)
    traj = lambda_trajectory(cfg, 5, stage=2)
    np.testing.assert_allclose(traj.final.points, path.second_end, atol=1e-12)
    with pytest.raises(ValueError):
        lambda_trajectory(cfg, 5, stage=4)


def test_rejects_wrong_input():
    with pytest.raises(ValueError):
        plan_lambda(Configuration("K", regular_simplex(3)))
    x = regular_simplex(3)
    with pytest.raises(InvalidConfiguration):
        plan_lambda(L(np.vstack([x, x[0]])))
    with pytest.raises(ValueError):
        plan_lambda(L(np.vstack([x, x.mean(axis=0)]))).at(-0.1)


def test_two_dimensions(rng):
    for kind in "IEB":
        traj = lambda_trajectory(random_l_config(rng, 2, kind), 12)
        assert is_pyramid_l(traj.final)
