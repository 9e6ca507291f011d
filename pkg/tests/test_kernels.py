import math
import os
import subprocess
import sys

import numpy as np
import pytest

from simplexflows import _accel, spherical
from simplexflows.geometry import solid_angle

BACKENDS = [_accel.python_kernels]
if _accel.compiled_kernels is not None:
    BACKENDS.append(_accel.compiled_kernels)


def test_backend_selected():
    assert _accel.BACKEND in ("cython", "python")
    expected = "cython" if _accel.compiled_kernels is not None else "python"
    assert _accel.BACKEND == expected


@pytest.mark.skipif(_accel.compiled_kernels is None, reason="compiled extension not built")
@pytest.mark.parametrize("n", [4, 5, 6])
def test_backends_agree(n):
    rng = np.random.default_rng(n)
    pts = spherical.sphere_table(n, 1 << 14)
    for _ in range(5):
        verts = rng.normal(size=(n + 1, n))
        inv = np.ascontiguousarray(np.linalg.inv((verts[1:] - verts[0]).T))
        py = _accel.python_kernels.cone_counts(inv, pts)
        c = _accel.compiled_kernels.cone_counts(inv, pts)
        assert tuple(py) == tuple(c)
        np.testing.assert_array_equal(
            np.asarray(_accel.python_kernels.simplex_cone_counts(inv, pts)),
            np.asarray(_accel.compiled_kernels.simplex_cone_counts(inv, pts)))


@pytest.mark.parametrize("kernels", BACKENDS)
def test_orthant_fraction(kernels):
    n = 4
    pts = spherical.sphere_table(n, 1 << 16)
    pos, neg = kernels.cone_counts(np.eye(n), pts)
    frac = (pos + neg) / (2 * len(pts))
    assert frac == pytest.approx(2.0 ** -n, abs=2e-3)


def test_table_is_on_sphere_and_cached():
    t = spherical.sphere_table(5, 1000)
    assert t.shape == (1024, 5)
    np.testing.assert_allclose(np.linalg.norm(t, axis=1), 1.0, atol=1e-12)
    assert spherical.sphere_table(5, 1024) is t
    assert not t.flags.writeable


def test_table_size_env(monkeypatch):
    monkeypatch.setenv(spherical.SIZE_ENV, "4096")
    assert spherical.table_size() == 4096
    monkeypatch.setenv(spherical.SIZE_ENV, "1")
    with pytest.raises(ValueError):
        spherical.table_size()


def test_sphere_volumes():
    assert spherical.sphere_volume(2) == pytest.approx(2 * math.pi)
    assert spherical.sphere_volume(3) == pytest.approx(4 * math.pi)
    assert spherical.sphere_volume(4) == pytest.approx(2 * math.pi ** 2)
    assert spherical.half_sphere_volume(3) == pytest.approx(2 * math.pi)


def test_orthant_solid_angle_four_dims():
    # an orthant of R^4 covers 1/16 of S^3
    a = solid_angle(np.zeros(4), np.eye(4))
    assert a == pytest.approx(2 * math.pi ** 2 / 16, rel=5e-3)


def test_simplex_fractions_sum_bound():
    rng = np.random.default_rng(3)
    verts = rng.normal(size=(5, 4))
    fr = spherical.simplex_cone_fractions(verts, 1 << 16)
    assert fr.shape == (5,)
    assert np.all(fr > 0)
    assert fr.sum() <= 0.5 + 1e-2


def test_environment_forces_fallback():
    env = dict(os.environ, SIMPLEXFLOWS_PURE_PYTHON="1")
    code = "import simplexflows; print(simplexflows.BACKEND)"
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                          text=True, check=True)
    assert proc.stdout.strip() == "python"
