"""Hot numerical loops: depth marches and fixed-step rate-equation stepping.

Each kernel is a single numpy implementation that is additionally compiled
with numba's ``@njit`` when available.  The module-level names
(``alpha_shape``, ``small_angle_march``, ...) dispatch to the compiled
build unless numba is unavailable or ``ISGSIM_NO_NUMBA=1`` is set; the
``*_numpy`` names always point at the interpreted build so
``benchmarks/kernel_benchmark.py`` can time the two side by side.

Conventions shared by all kernels:

* the phase grid is ``phi_k = 2*pi*k/n_phi``, periodic;
* ``u`` is the drive-scaled local pumping rate on that grid
  (``zeta*r`` for the standard scheme, ``xi*r`` for sublevel schemes);
* ``scheme_kind`` is 0 for the standard shelving scheme, 1 for the
  two-sublevel schemes (replica rate = grid rotation of ``u`` by
  ``shift_bins``), and 2 for the strong-drive limit of the sublevel
  schemes, where the saturation unit in the steady state drops out and
  the absorption depends only on the pump shape;
* absorption is returned normalized to the unpumped value ``alpha0``.
"""

import os

import numpy as np


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_REQUESTED = not _env_flag("ISGSIM_NO_NUMBA")
NUMBA_ENABLED = False
if NUMBA_REQUESTED:
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False


def _maybe_jit(fn):
    return _njit(cache=True)(fn) if NUMBA_ENABLED else fn


def _alpha_shape_impl(u, shift_bins, scheme_kind):
    # Steady-state alpha(phi)/alpha0 for the local drive-scaled rate u(phi).
    if scheme_kind == 0:
        return 1.0 / (1.0 + u)
    # Replica rate u'(phi) = u(phi - shift); the second population
    # difference enters the absorption evaluated at phi + shift.
    up = np.roll(u, shift_bins)
    if scheme_kind == 2:
        # Strong-drive limit: differences -> u'/(u+u') and u/(u+u');
        # unpumped points stay at equilibrium 1/2 each.
        den = u + up
        safe = np.where(den > 0.0, den, 1.0)
        d_first = np.where(den > 0.0, up / safe, 0.5)
        d_second = np.where(den > 0.0, u / safe, 0.5)
        return d_first + np.roll(d_second, -shift_bins)
    den = 1.0 + u + up
    d_first = (0.5 + up) / den
    d_second = (0.5 + u) / den
    return d_first + np.roll(d_second, -shift_bins)


def _small_angle_march_impl(i0, drive, shift_bins, scheme_kind, alpha0, length, n_z):
    # Pointwise-in-phi intensity equation dI/dz = -alpha(z,phi) I, RK4 in z.
    # i0 is the normalized entrance intensity (mean 1); the local drive is
    # drive * I(z,phi).
    def shape(u):
        if scheme_kind == 0:
            return 1.0 / (1.0 + u)
        up = np.roll(u, shift_bins)
        if scheme_kind == 2:
            den = u + up
            safe = np.where(den > 0.0, den, 1.0)
            d_first = np.where(den > 0.0, up / safe, 0.5)
            d_second = np.where(den > 0.0, u / safe, 0.5)
            return d_first + np.roll(d_second, -shift_bins)
        den = 1.0 + u + up
        return (0.5 + up) / den + np.roll((0.5 + u) / den, -shift_bins)

    n_phi = i0.shape[0]
    h = length / n_z
    inten = np.empty((n_z + 1, n_phi))
    alpha = np.empty((n_z + 1, n_phi))
    cur = i0.copy()
    for i in range(n_z + 1):
        inten[i] = cur
        alpha[i] = alpha0 * shape(drive * cur)
        if i == n_z:
            break
        k1 = -alpha0 * shape(drive * cur) * cur
        y = cur + 0.5 * h * k1
        k2 = -alpha0 * shape(drive * y) * y
        y = cur + 0.5 * h * k2
        k3 = -alpha0 * shape(drive * y) * y
        y = cur + h * k3
        k4 = -alpha0 * shape(drive * y) * y
        cur = cur + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return alpha, inten


def _large_angle_march_impl(
    drive, shift_bins, scheme_kind, alpha0, length, n_z, n_phi, e0_in, e1_in
):
    # Two-mode march: only orders 0 and 1 propagate.  The local rate is
    # proportional to |E0 + E1 exp(-i phi)|^2, normalized so that the
    # entrance phi-mean equals the requested drive.
    def shape(u):
        if scheme_kind == 0:
            return 1.0 / (1.0 + u)
        up = np.roll(u, shift_bins)
        if scheme_kind == 2:
            den = u + up
            safe = np.where(den > 0.0, den, 1.0)
            d_first = np.where(den > 0.0, up / safe, 0.5)
            d_second = np.where(den > 0.0, u / safe, 0.5)
            return d_first + np.roll(d_second, -shift_bins)
        den = 1.0 + u + up
        return (0.5 + up) / den + np.roll((0.5 + u) / den, -shift_bins)

    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    eip = np.exp(1j * phi)
    emip = np.conj(eip)
    h = length / n_z
    scale = drive / (abs(e0_in) ** 2 + abs(e1_in) ** 2)
    e0 = np.empty(n_z + 1, np.complex128)
    e1 = np.empty(n_z + 1, np.complex128)
    a0 = np.empty(n_z + 1)
    a1 = np.empty(n_z + 1, np.complex128)
    alpha = np.empty((n_z + 1, n_phi))
    c0 = e0_in + 0j
    c1 = e1_in + 0j
    for i in range(n_z + 1):
        g = c0 + c1 * emip
        u = scale * (g.real**2 + g.imag**2)
        a = shape(u)
        a0_i = alpha0 * np.mean(a)
        a1_i = alpha0 * np.mean(a * eip)
        alpha[i] = alpha0 * a
        e0[i] = c0
        e1[i] = c1
        a0[i] = a0_i
        a1[i] = a1_i
        if i == n_z:
            break
        k1_0 = -0.5 * a0_i * c0
        k1_1 = -0.5 * a0_i * c1 - a1_i * c0

        y0 = c0 + 0.5 * h * k1_0
        y1 = c1 + 0.5 * h * k1_1
        g = y0 + y1 * emip
        u = scale * (g.real**2 + g.imag**2)
        a = shape(u)
        b0 = alpha0 * np.mean(a)
        b1 = alpha0 * np.mean(a * eip)
        k2_0 = -0.5 * b0 * y0
        k2_1 = -0.5 * b0 * y1 - b1 * y0

        y0 = c0 + 0.5 * h * k2_0
        y1 = c1 + 0.5 * h * k2_1
        g = y0 + y1 * emip
        u = scale * (g.real**2 + g.imag**2)
        a = shape(u)
        b0 = alpha0 * np.mean(a)
        b1 = alpha0 * np.mean(a * eip)
        k3_0 = -0.5 * b0 * y0
        k3_1 = -0.5 * b0 * y1 - b1 * y0

        y0 = c0 + h * k3_0
        y1 = c1 + h * k3_1
        g = y0 + y1 * emip
        u = scale * (g.real**2 + g.imag**2)
        a = shape(u)
        b0 = alpha0 * np.mean(a)
        b1 = alpha0 * np.mean(a * eip)
        k4_0 = -0.5 * b0 * y0
        k4_1 = -0.5 * b0 * y1 - b1 * y0

        c0 = c0 + (h / 6.0) * (k1_0 + 2.0 * k2_0 + 2.0 * k3_0 + k4_0)
        c1 = c1 + (h / 6.0) * (k1_1 + 2.0 * k2_1 + 2.0 * k3_1 + k4_1)
    return alpha, e0, e1, a0, a1


def _probe_march_impl(z, a0, a1, substeps):
    # Weak probe through sampled coefficients a0(z) (real) and a1(z)
    # (complex): dE0/dz = -a0/2 E0, dE1/dz = -a0/2 E1 - a1 E0 with
    # E0(0) = 1, E1(0) = 0.  Coefficients are linearly interpolated inside
    # each sample interval.
    c0 = 1.0 + 0j
    c1 = 0.0 + 0j
    for i in range(z.shape[0] - 1):
        hseg = z[i + 1] - z[i]
        da0 = a0[i + 1] - a0[i]
        da1 = a1[i + 1] - a1[i]
        h = hseg / substeps
        for s in range(substeps):
            f_lo = s / substeps
            f_mid = (s + 0.5) / substeps
            f_hi = (s + 1.0) / substeps
            a0_lo = a0[i] + da0 * f_lo
            a0_mid = a0[i] + da0 * f_mid
            a0_hi = a0[i] + da0 * f_hi
            a1_lo = a1[i] + da1 * f_lo
            a1_mid = a1[i] + da1 * f_mid
            a1_hi = a1[i] + da1 * f_hi

            k1_0 = -0.5 * a0_lo * c0
            k1_1 = -0.5 * a0_lo * c1 - a1_lo * c0
            y0 = c0 + 0.5 * h * k1_0
            y1 = c1 + 0.5 * h * k1_1
            k2_0 = -0.5 * a0_mid * y0
            k2_1 = -0.5 * a0_mid * y1 - a1_mid * y0
            y0 = c0 + 0.5 * h * k2_0
            y1 = c1 + 0.5 * h * k2_1
            k3_0 = -0.5 * a0_mid * y0
            k3_1 = -0.5 * a0_mid * y1 - a1_mid * y0
            y0 = c0 + h * k3_0
            y1 = c1 + h * k3_1
            k4_0 = -0.5 * a0_hi * y0
            k4_1 = -0.5 * a0_hi * y1 - a1_hi * y0

            c0 = c0 + (h / 6.0) * (k1_0 + 2.0 * k2_0 + 2.0 * k3_0 + k4_0)
            c1 = c1 + (h / 6.0) * (k1_1 + 2.0 * k2_1 + 2.0 * k3_1 + k4_1)
    return c0, c1


def _rate_rk4_impl(mat, n0, h, n_steps, check_step):
    # Fixed-step RK4 for dn/dt = M n.  Tracks the worst deviation of
    # sum(n) from 1 and a snapshot at check_step for the convergence test
    # of the transient oracle.
    n = n0.copy()
    n_check = n0.copy()
    drift = 0.0
    for i in range(n_steps):
        k1 = np.dot(mat, n)
        k2 = np.dot(mat, n + 0.5 * h * k1)
        k3 = np.dot(mat, n + 0.5 * h * k2)
        k4 = np.dot(mat, n + h * k3)
        n = n + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        d = abs(np.sum(n) - 1.0)
        if d > drift:
            drift = d
        if i + 1 == check_step:
            n_check = n.copy()
    return n, n_check, drift


alpha_shape_numpy = _alpha_shape_impl
small_angle_march_numpy = _small_angle_march_impl
large_angle_march_numpy = _large_angle_march_impl
probe_march_numpy = _probe_march_impl
rate_rk4_numpy = _rate_rk4_impl

alpha_shape = _maybe_jit(_alpha_shape_impl)
small_angle_march = _maybe_jit(_small_angle_march_impl)
large_angle_march = _maybe_jit(_large_angle_march_impl)
probe_march = _maybe_jit(_probe_march_impl)
rate_rk4 = _maybe_jit(_rate_rk4_impl)
