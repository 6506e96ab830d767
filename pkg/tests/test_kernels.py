import numpy as np
import pytest

from isgsim import _kernels

pytestmark = pytest.mark.skipif(
    not _kernels.NUMBA_ENABLED, reason="numba path disabled; nothing to compare"
)

N_PHI = 64
PHI = 2 * np.pi * np.arange(N_PHI) / N_PHI
I0 = 1.0 + np.cos(PHI)


@pytest.mark.parametrize("kind", [0, 1, 2])
def test_alpha_shape_paths_agree(kind):
    u = 3.0 * I0 + 0.01
    a = _kernels.alpha_shape(u, N_PHI // 2, kind)
    b = _kernels.alpha_shape_numpy(u, N_PHI // 2, kind)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=0)


def test_alpha_shape_saturated_unpumped_is_equilibrium():
    u = np.zeros(N_PHI)
    a = _kernels.alpha_shape_numpy(u, N_PHI // 2, 2)
    np.testing.assert_allclose(a, 1.0)


@pytest.mark.parametrize("kind,drive", [(0, 0.9), (1, 30.0), (2, 1.0)])
def test_small_angle_march_paths_agree(kind, drive):
    args = (I0, drive, N_PHI // 2, kind, 1.0, 2.0, 80)
    alpha_a, inten_a = _kernels.small_angle_march(*args)
    alpha_b, inten_b = _kernels.small_angle_march_numpy(*args)
    np.testing.assert_allclose(alpha_a, alpha_b, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(inten_a, inten_b, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("kind,drive", [(0, 0.9), (1, 30.0)])
def test_large_angle_march_paths_agree(kind, drive):
    args = (drive, N_PHI // 2, kind, 1.0, 2.0, 80, N_PHI, 1.0 + 0j, 1.0 + 0j)
    out_a = _kernels.large_angle_march(*args)
    out_b = _kernels.large_angle_march_numpy(*args)
    for a, b in zip(out_a, out_b):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)


def test_probe_march_paths_agree():
    z = np.linspace(0.0, 2.0, 81)
    a0 = 1.0 + 0.1 * np.sin(z)
    a1 = (0.3 + 0.2j) * np.exp(-z)
    got_a = _kernels.probe_march(z, a0, a1, 2)
    got_b = _kernels.probe_march_numpy(z, a0, a1, 2)
    np.testing.assert_allclose(got_a, got_b, rtol=1e-12)


def test_rate_rk4_paths_agree():
    mat = np.array([[-2.0, 1.0, 0.5], [2.0, -3.0, 0.0], [0.0, 2.0, -0.5]])
    n0 = np.array([1.0, 0.0, 0.0])
    got_a = _kernels.rate_rk4(mat, n0, 1e-3, 5000, 500)
    got_b = _kernels.rate_rk4_numpy(mat, n0, 1e-3, 5000, 500)
    np.testing.assert_allclose(got_a[0], got_b[0], rtol=1e-12)
    np.testing.assert_allclose(got_a[1], got_b[1], rtol=1e-12)
