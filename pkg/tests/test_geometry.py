import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from simplexflows import spherical
from simplexflows.checks import brute_force_radon
from simplexflows.config import Tolerances
from simplexflows.errors import (
    DegenerateCone,
    DegenerateSimplex,
    InvalidConfiguration,
    NotGated,
    OutOfRange,
    RankDeficient,
)
from simplexflows.geometry import (
    AffineMap,
    Boundary,
    Configuration,
    EdgeFace,
    Hyperplane,
    Interior,
    NonDegenerate,
    Simplex,
    affine_map_from_simplices,
    beta_from_alpha,
    canonical_normal,
    classify,
    eta_from_alpha,
    greatest_solid_angle,
    incenter_inradius,
    induced_affine_map,
    is_embedded,
    radon_partition,
    simplex_volume,
    solid_angle,
    vertex_solid_angles,
    wide_face,
)
from simplexflows.samples import random_simplex

from conftest import random_rotation, regular_tetrahedron

# closed form arccos(23/27); Girard's formula 3 arccos(1/3) - pi gives the same digits
REGULAR_TETRA_ANGLE = 0.5512855984325308
# 1 / (2 sqrt 6)
UNIT_TETRA_INRADIUS = 0.2041241452319315


# --- types -----------------------------------------------------------------

def test_simplex_rejects_dependent_subsets():
    with pytest.raises(InvalidConfiguration):
        Simplex([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0]])


def test_simplex_accepts_flat_with_interior_vertex():
    s = Simplex([[0, 0], [1, 0], [0, 1], [0.2, 0.2]][:3])
    assert s.n == 2
    flat = Simplex([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.25, 0.25, 0]])
    assert flat.volume == pytest.approx(0.0, abs=1e-15)


def test_configuration_json_round_trip(tmp_path):
    cfg = Configuration("L", np.arange(15, dtype=float).reshape(5, 3) ** 1.5)
    path = tmp_path / "c.json"
    cfg.dump(path)
    back = Configuration.load(path)
    assert back.kind == "L" and back.n == 3
    np.testing.assert_array_equal(back.points, cfg.points)


def test_configuration_validates_counts():
    with pytest.raises(ValueError):
        Configuration("K", np.zeros((5, 3)))
    with pytest.raises(ValueError):
        Configuration.from_json({"kind": "K", "n": 2, "points": np.eye(4, 3).tolist()})


def test_affine_map_compose_inverse(rng):
    f = AffineMap(rng.normal(size=(3, 3)), rng.normal(size=3))
    x = rng.normal(size=(5, 3))
    np.testing.assert_allclose(f.compose(f.inverse())(x), x, atol=1e-12)


def test_affine_map_from_simplices(rng):
    a, b = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
    np.testing.assert_allclose(affine_map_from_simplices(a, b)(a), b, atol=1e-12)


# --- Radon partitions --------------------------------------------------------

def test_radon_interior_point_of_triangle():
    res = radon_partition([[0, 0], [1, 0], [0, 1], [0.25, 0.25]])
    assert res.part1 == (3,)
    assert res.part2 == (0, 1, 2)
    np.testing.assert_allclose(res.radon_point, [0.25, 0.25], atol=1e-12)


def test_radon_square_diagonals():
    res = radon_partition([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert {res.part1, res.part2} == {(0, 2), (1, 3)}
    np.testing.assert_allclose(res.radon_point, [0.5, 0.5], atol=1e-12)


def test_radon_coefficients_are_an_affine_dependency(rng):
    pts = rng.normal(size=(6, 4))
    lam = radon_partition(pts).coefficients
    assert abs(lam.sum()) < 1e-12
    np.testing.assert_allclose(lam @ pts, 0, atol=1e-12)
    assert lam.min() < 0 < lam.max()


def test_radon_ambiguous_nullspace():
    with pytest.raises(RankDeficient):
        radon_partition([[0, 0], [1, 0], [2, 0], [3, 0]])


def _in_hull(point, pts):
    m = len(pts)
    eq = np.vstack([pts.T, np.ones(m)])
    res = linprog(np.zeros(m), A_eq=eq, b_eq=np.append(point, 1.0), bounds=(0, None),
                  method="highs")
    return res.status == 0


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 4))
def test_radon_matches_brute_force(seed, n):
    pts = np.random.default_rng(seed).normal(size=(n + 2, n))
    res = radon_partition(pts)
    assert brute_force_radon(pts) == [frozenset([res.part1, res.part2])]
    assert _in_hull(res.radon_point, pts[list(res.part1)])
    assert _in_hull(res.radon_point, pts[list(res.part2)])


# --- classification ----------------------------------------------------------

def test_classify_regular_tetrahedron():
    assert isinstance(classify(Configuration("K", regular_tetrahedron())), NonDegenerate)


def test_classify_flat_k():
    cls = classify(Configuration("K", [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.3, 0.3, 0]]))
    assert isinstance(cls, Hyperplane) and cls.interior == 3


def test_classify_l_barycenter_is_interior():
    pts = np.vstack([regular_tetrahedron(), np.zeros(3)])
    cls = classify(Configuration("L", pts))
    assert isinstance(cls, Interior) and cls.vertex == 4


def test_classify_l_edge_face_and_boundary():
    face = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
    edge = np.array([[0.2, 0.2, 0.1], [0.2, 0.2, -2.0]])
    cls = classify(Configuration("L", np.vstack([face, edge])))
    assert isinstance(cls, EdgeFace)
    assert cls.edge == (3, 4) and cls.face == (0, 1, 2)
    np.testing.assert_allclose(cls.radon_point, [0.2, 0.2, 0.0], atol=1e-12)
    on_face = np.vstack([face, [[0.2, 0.2, 0.0], [0.3, 0.3, 1.0]]])
    cls = classify(Configuration("L", on_face))
    assert isinstance(cls, Boundary) and cls.vertex == 3 and cls.face == (0, 1, 2)


def test_classify_rejects_non_embedded():
    # two edges of a planar quadrilateral cross
    pts = [[0, 0, 0], [1, 1, 0], [1, 0, 0], [0, 1, 0]]
    assert not is_embedded(Configuration("K", pts))
    with pytest.raises(InvalidConfiguration):
        classify(Configuration("K", pts))


def _class_signature(cls, perm):
    # map indices of the permuted configuration back to the originals
    if isinstance(cls, Interior):
        return ("I", perm[cls.vertex])
    if isinstance(cls, Boundary):
        return ("B", perm[cls.vertex], frozenset(perm[i] for i in cls.face))
    if isinstance(cls, EdgeFace):
        return ("E", tuple(perm[i] for i in cls.edge), frozenset(perm[i] for i in cls.face))
    if isinstance(cls, Hyperplane):
        return ("H", perm[cls.interior])
    return ("N",)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from("IEB"))
def test_classify_invariant_under_relabeling_and_rigid_motion(seed, kind):
    from simplexflows.samples import random_l_config

    rng = np.random.default_rng(seed)
    cfg = random_l_config(rng, 3, kind)
    base = _class_signature(classify(cfg), list(range(5)))
    perm = rng.permutation(5)
    q = random_rotation(rng, 3)
    moved = cfg.points[perm] @ q.T + rng.normal(size=3)
    assert _class_signature(classify(Configuration("L", moved)), list(perm)) == base


# --- solid angles --------------------------------------------------------------

def test_solid_angle_quarter_plane():
    assert solid_angle(np.zeros(2), [[1, 0], [0, 1]]) == pytest.approx(math.pi / 2, abs=1e-15)


def test_solid_angle_octant():
    assert solid_angle(np.zeros(3), np.eye(3)) == pytest.approx(math.pi / 2, abs=1e-14)


def test_solid_angle_regular_tetrahedron_vertex():
    v = regular_tetrahedron()
    assert solid_angle(v[0], v[1:] - v[0]) == pytest.approx(REGULAR_TETRA_ANGLE, abs=1e-12)


def test_solid_angle_monte_carlo_cross_check():
    rng = np.random.default_rng(7)
    v = regular_tetrahedron()
    rays = v[1:] - v[0]
    u = rng.normal(size=(400000, 3))
    coef = np.linalg.solve(rays.T, u.T)
    frac = np.mean(np.all(coef >= 0, axis=0))
    assert 4 * math.pi * frac == pytest.approx(REGULAR_TETRA_ANGLE, abs=0.01)


def test_solid_angle_orthant_in_four_dimensions():
    # 1/16 of Vol(S^3) = 2 pi^2
    assert solid_angle(np.zeros(4), np.eye(4)) == pytest.approx(2 * math.pi ** 2 / 16, rel=1e-3)


def test_solid_angle_dependent_rays():
    with pytest.raises(DegenerateCone):
        solid_angle(np.zeros(3), [[1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_solid_angle_additivity():
    rng = np.random.default_rng(3)
    rays = rng.normal(size=(3, 3))
    inner = 0.3 * rays[1] + 0.7 * rays[2]
    whole = solid_angle(np.zeros(3), rays)
    parts = solid_angle(np.zeros(3), [rays[0], rays[1], inner]) + \
        solid_angle(np.zeros(3), [rays[0], inner, rays[2]])
    assert parts == pytest.approx(whole, abs=1e-12)


def test_solid_angle_additivity_sampled():
    rng = np.random.default_rng(5)
    rays = rng.normal(size=(4, 4))
    inner = 0.5 * rays[2] + 0.5 * rays[3]
    whole = solid_angle(np.zeros(4), rays)
    parts = solid_angle(np.zeros(4), [rays[0], rays[1], rays[2], inner]) + \
        solid_angle(np.zeros(4), [rays[0], rays[1], inner, rays[3]])
    assert parts == pytest.approx(whole, abs=5e-3)


def test_greatest_solid_angle_regular_ties_to_lowest_index():
    alpha, vertex = greatest_solid_angle(Simplex(regular_tetrahedron()))
    assert alpha == pytest.approx(REGULAR_TETRA_ANGLE, abs=1e-12)
    assert vertex == 0


def test_greatest_solid_angle_flat_is_v():
    flat = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.25, 0.25, 0]]
    assert greatest_solid_angle(Simplex(flat)) == (2 * math.pi, 3)


def test_triangle_angles_sum_to_pi(rng):
    for _ in range(20):
        angles = vertex_solid_angles(random_simplex(rng, 2))
        assert angles.sum() == pytest.approx(math.pi, abs=1e-12)
        assert greatest_solid_angle(Simplex(random_simplex(rng, 2)))[0] < math.pi


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 3))
def test_solid_angle_sum_bound(seed, n):
    s = random_simplex(np.random.default_rng(seed), n)
    total = vertex_solid_angles(s).sum()
    assert 0 < total <= spherical.half_sphere_volume(n) + 1e-9


def test_solid_angle_sum_bound_four_dimensions(rng):
    for _ in range(5):
        total = vertex_solid_angles(random_simplex(rng, 4)).sum()
        assert 0 < total <= spherical.half_sphere_volume(4) + 5e-3


def test_sphere_table_is_deterministic_and_read_only():
    a = spherical.sphere_table(4, 1 << 10)
    assert a is spherical.sphere_table(4, 1 << 10)
    assert not a.flags.writeable
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-12)


def test_table_size_env(monkeypatch):
    monkeypatch.setenv(spherical.SIZE_ENV, "4096")
    assert spherical.table_size() == 4096
    monkeypatch.setenv(spherical.SIZE_ENV, "1")
    with pytest.raises(ValueError):
        spherical.table_size()


# --- reparametrizations ---------------------------------------------------------

def test_eta_endpoints():
    v = spherical.half_sphere_volume(3)
    assert eta_from_alpha(0.5 * v, 3) == 0.0
    assert eta_from_alpha(v, 3) == 1.0
    with pytest.raises(OutOfRange):
        eta_from_alpha(0.2 * v, 3)
    assert eta_from_alpha(0.2 * v, 3, clamp=True) == 0.0


def test_beta_zero_at_three_quarters():
    v = spherical.half_sphere_volume(3)
    assert beta_from_alpha(0.75 * v, 3) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(OutOfRange):
        beta_from_alpha(0.9 * v, 3)
    assert beta_from_alpha(0.9 * v, 3, clamp=True) == pytest.approx(0.0, abs=1e-12)


def test_wide_face():
    flat = Configuration("K", [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.25, 0.25, 0]])
    assert wide_face(flat) == (3, (0, 1, 2))
    low = Configuration("K", [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.3, 0.3, 0.05]])
    assert wide_face(low)[0] == 3
    with pytest.raises(NotGated):
        wide_face(Configuration("K", regular_tetrahedron()))


# --- induced maps and incenters -----------------------------------------------------

def test_induced_map_identity(rng):
    face = rng.normal(size=(3, 3))
    nu = canonical_normal(face)
    f = induced_affine_map(face, face, nu, nu)
    np.testing.assert_allclose(f.linear, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(f.translation, 0, atol=1e-12)


def test_induced_map_rotation(rng):
    face = rng.normal(size=(3, 3))
    q = random_rotation(rng, 3)
    f = induced_affine_map(face, face @ q.T, canonical_normal(face), q @ canonical_normal(face))
    np.testing.assert_allclose(f.linear, q, atol=1e-12)
    np.testing.assert_allclose(f.translation, 0, atol=1e-12)
    assert f.orientation == 1


def test_induced_map_round_trip(rng):
    a, b = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
    na, nb = canonical_normal(a), canonical_normal(b)
    f = induced_affine_map(a, b, na, nb)
    g = induced_affine_map(b, a, nb, na)
    x = rng.normal(size=(10, 3))
    np.testing.assert_allclose(g.compose(f)(x), x, atol=1e-10)
    np.testing.assert_allclose(f(a), b, atol=1e-12)


def test_induced_map_rank_deficient():
    face = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0]], dtype=float)
    with pytest.raises(RankDeficient):
        induced_affine_map(face, face, [0, 0, 1], [0, 0, 1])


def test_unit_tetrahedron_inradius():
    verts = regular_tetrahedron() / math.sqrt(8)
    _, r = incenter_inradius(verts)
    assert r == pytest.approx(UNIT_TETRA_INRADIUS, abs=1e-14)


def test_inradius_scales_linearly(rng):
    x = rng.normal(size=(4, 3))
    _, r = incenter_inradius(x)
    _, r3 = incenter_inradius(3.5 * x)
    assert r3 == pytest.approx(3.5 * r, rel=1e-12)


def _facet_distances(verts, point):
    out = []
    for i in range(len(verts)):
        face = np.delete(verts, i, axis=0)
        out.append(abs((point - face[0]) @ canonical_normal(face)))
    return np.array(out)


def _chebyshev_center(verts):
    # maximize r subject to a_i . x + r <= b_i for the outward facet normals
    n = verts.shape[1]
    rows, rhs = [], []
    for i in range(n + 1):
        face = np.delete(verts, i, axis=0)
        nu = canonical_normal(face)
        if (verts[i] - face[0]) @ nu > 0:
            nu = -nu
        rows.append(np.append(nu, 1.0))
        rhs.append(nu @ face[0])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(None, None)] * n + [(0, None)], method="highs")
    return res.x[:n], res.x[-1]


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 5))
def test_incenter_matches_chebyshev_center(seed, n):
    verts = random_simplex(np.random.default_rng(seed), n)
    center, r = incenter_inradius(verts)
    np.testing.assert_allclose(_facet_distances(verts, center), r, rtol=1e-9, atol=1e-12)
    _, r_lp = _chebyshev_center(verts)
    assert r == pytest.approx(r_lp, abs=1e-7)


def test_incenter_degenerate():
    with pytest.raises(DegenerateSimplex):
        incenter_inradius([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.2, 0.2, 0]])


def test_simplex_volume_matches_determinant(rng):
    x = rng.normal(size=(5, 4))
    assert simplex_volume(x) == pytest.approx(abs(np.linalg.det(x[1:] - x[0])) / 24, rel=1e-12)
    tri = np.array([[0, 0, 0], [2, 0, 0], [0, 2, 0]], dtype=float)
    assert simplex_volume(tri) == pytest.approx(2.0, rel=1e-14)


def test_tolerances_validate():
    with pytest.raises(ValueError):
        Tolerances(rank=0.0)


def test_classify_permutation_of_k(rng):
    flat = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.3, 0.3, 0]], dtype=float)
    for perm in permutations(range(4)):
        cls = classify(Configuration("K", flat[list(perm)]))
        assert perm[cls.interior] == 3
