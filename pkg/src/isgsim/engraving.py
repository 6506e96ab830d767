"""Depth-resolved engraving of absorption gratings in optically thick media.

The engraving fields are propagated self-consistently through the grating
they create, in a quasi-static accumulation regime: at every depth the
absorption is the local steady state of the pumping kinetics, and the
fields advance through it by fixed-step fourth-order integration with a
mandatory step-halving verification.

Two beam configurations are supported.  At small angle (including
collinear), all diffraction orders are phase-matched and the intensity
equation dI/dz = -alpha(z,phi) I holds pointwise in phi.  At large angle
only orders 0 and 1 propagate: the march advances the two complex mode
amplitudes coupled through the grating's first Fourier coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ConvergenceError, GridResolutionError, SchemeMismatchError
from .excitation import ExcitationField, PhaseGrid, sinusoidal_pump
from .kinetics import (
    LevelScheme,
    Standard3,
    absorption,
    drive_coefficient,
    steady_state,
)

#: default depth resolution; doubling it changes desk-scale contrasts by < 1e-6
DEFAULT_N_Z = 400

#: step-halving tolerance on max |alpha_nz - alpha_2nz| / alpha0
HALVING_TOL = 1e-6


@dataclass(frozen=True)
class MediumSpec:
    """Absorbing medium: any two of (alpha0, length, optical_depth), the
    third derived.  Wavelength and beam angle are only needed for
    phase-matching diagnostics."""

    alpha0: Optional[float] = None  # m^-1
    length: Optional[float] = None  # m
    optical_depth: Optional[float] = None  # alpha0 * length
    wavelength: Optional[float] = None  # m
    theta: Optional[float] = None  # rad

    def __post_init__(self):
        a, length, od = self.alpha0, self.length, self.optical_depth
        given = sum(v is not None for v in (a, length, od))
        if given < 2:
            raise ValueError("give two of alpha0, length, optical_depth")
        if a is None:
            a = od / length
        elif length is None:
            length = od / a
        elif od is None:
            od = a * length
        elif abs(od - a * length) > 1e-9 * abs(od):
            raise ValueError("alpha0 * length inconsistent with optical_depth")
        if od <= 0:
            raise ValueError("optical depth must be > 0")
        object.__setattr__(self, "alpha0", float(a))
        object.__setattr__(self, "length", float(length))
        object.__setattr__(self, "optical_depth", float(od))
        if self.wavelength is not None and self.wavelength <= 0:
            raise ValueError("wavelength must be > 0")
        if self.theta is not None and self.theta < 0:
            raise ValueError("theta must be >= 0")


@dataclass(frozen=True)
class GratingProfile:
    """Absorption alpha(z, phi) on a depth-by-phase grid (m^-1)."""

    z: np.ndarray  # (n_z + 1,) depths over [0, L]
    grid: PhaseGrid
    alpha: np.ndarray  # (n_z + 1, n_phi)
    alpha0: float
    scheme_kind: str
    regime: str  # entrance-only | small-angle | large-angle | uniform-ideal
    intensity: Optional[np.ndarray] = None  # small-angle marches record I(z, phi)

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        alpha = np.asarray(self.alpha, dtype=float)
        if alpha.shape != (z.shape[0], self.grid.n_phi):
            raise ValueError("alpha must be (n_z + 1, n_phi)")
        if np.any(alpha < -1e-12 * self.alpha0):
            raise ValueError("absorption must be >= 0")
        for name, arr in (("z", z), ("alpha", alpha)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def length(self) -> float:
        return float(self.z[-1])

    def entrance(self) -> np.ndarray:
        return self.alpha[0]

    def output(self) -> np.ndarray:
        return self.alpha[-1]

    def to_csv(self, stream) -> None:
        """Header row of phi values (first cell ``z``), one row per depth."""
        header = "z," + ",".join(repr(float(v)) for v in self.grid.phi)
        stream.write(header + "\n")
        for zi, row in zip(self.z, self.alpha):
            stream.write(
                repr(float(zi)) + "," + ",".join(repr(float(v)) for v in row) + "\n"
            )


@dataclass(frozen=True)
class FourierGrating:
    """Complex phase-harmonic coefficients of a grating per depth step:
    coeffs[i, p] = mean over phi of alpha(z_i, phi) exp(i p phi)."""

    z: np.ndarray  # (n_z + 1,)
    coeffs: np.ndarray  # complex, (n_z + 1, p_max + 1)

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 2 or coeffs.shape[0] != z.shape[0]:
            raise ValueError("coeffs must be (n_z + 1, p_max + 1)")
        if np.any(coeffs[:, 0].real <= 0) or np.any(
            np.abs(coeffs[:, 0].imag) > 1e-9 * np.max(coeffs[:, 0].real)
        ):
            raise ValueError("zeroth coefficient must be real and positive")
        for name, arr in (("z", z), ("coeffs", coeffs)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def length(self) -> float:
        return float(self.z[-1])

    @property
    def a0(self) -> np.ndarray:
        """alpha^(0)(z), real."""
        return self.coeffs[:, 0].real

    @property
    def a1(self) -> np.ndarray:
        """alpha^(1)(z), complex."""
        return self.coeffs[:, 1]


@dataclass(frozen=True)
class PhaseMatching:
    """Highest grating order that radiates over the full depth, plus the
    regime classification.  ``n_max=None`` means all orders (collinear)."""

    n_max: Optional[int]
    regime: str  # small-angle | large-angle | ambiguous
    theta_c: float  # sqrt(lambda / 2 L), rad
    grating_wavevector: float  # |K|, m^-1


def contrast(alpha_row, alpha0: float) -> float:
    """(alpha_max - alpha_min) / alpha0 for one profile row."""
    row = np.asarray(alpha_row, dtype=float)
    if row.size == 0:
        raise ValueError("empty profile row")
    return float((row.max() - row.min()) / alpha0)


def _require_aligned(scheme: LevelScheme, field: ExcitationField, allow_misaligned: bool):
    if isinstance(scheme, Standard3):
        return
    if allow_misaligned:
        return
    if field.replica_shift_bins != field.grid.n_phi // 2:
        raise ValueError(
            "sublevel engraving expects the replica in antiphase (shift of half "
            "a period); pass allow_misaligned=True to override"
        )


def entrance_profile(
    scheme: LevelScheme,
    field: ExcitationField,
    alpha0: float = 1.0,
    allow_misaligned: bool = False,
) -> np.ndarray:
    """alpha(phi) at z = 0 (m^-1) from the pointwise steady state."""
    _require_aligned(scheme, field, allow_misaligned)
    if isinstance(scheme, Standard3):
        return absorption(scheme, alpha0, steady_state(scheme, field.r_of_phi))
    d_first, d_second = steady_state(scheme, field.r_of_phi, field.replica)
    return absorption(
        scheme, alpha0, d_first, d_second, shift_bins=field.replica_shift_bins
    )


def max_phase_matched_order(medium: MediumSpec) -> PhaseMatching:
    """Largest order n with n(n-1) K^2 L / k < pi, and the beam regime.

    Large angle means the phase-matching condition silences every order
    beyond the two engraving beams (n_max == 1); small angle requires the
    angle to sit well below theta_c = sqrt(lambda/2L) so that all
    significant orders survive.  In between the classification is
    ambiguous and no propagation reduction applies.
    """
    if medium.wavelength is None or medium.theta is None:
        raise ValueError("wavelength and theta are needed for phase matching")
    lam, length, theta = medium.wavelength, medium.length, medium.theta
    theta_c = math.sqrt(lam / (2.0 * length))
    k = 2.0 * math.pi / lam
    big_k = 2.0 * k * math.sin(theta / 2.0)
    if theta == 0.0:
        return PhaseMatching(None, "small-angle", theta_c, 0.0)
    # n (n - 1) < pi k / (K^2 L)
    bound = math.pi * k / (big_k**2 * length)
    n_max = int(math.floor((1.0 + math.sqrt(1.0 + 4.0 * bound)) / 2.0))
    if n_max * (n_max - 1) >= bound:
        n_max -= 1
    n_max = max(n_max, 1)
    if n_max == 1:
        regime = "large-angle"
    elif theta < theta_c / 3.0:
        regime = "small-angle"
    else:
        regime = "ambiguous"
    return PhaseMatching(n_max, regime, theta_c, big_k)


def _march_setup(scheme: LevelScheme, field: ExcitationField, saturated: bool):
    """(drive, scheme_kind) pair for the kernels.

    The saturated flag selects the strong-drive asymptote of the sublevel
    schemes (entrance grating contrast -> 2), where the drive magnitude
    drops out of the steady state and only the pump shape matters.
    """
    if saturated:
        if isinstance(scheme, Standard3):
            raise SchemeMismatchError(
                "the standard scheme has no saturated grating limit "
                "(strong drive bleaches it flat)"
            )
        return 1.0, 2
    return drive_coefficient(scheme) * field.r_avg, 0 if isinstance(scheme, Standard3) else 1


def _entrance_intensity(field: ExcitationField) -> np.ndarray:
    if field.r_avg == 0.0:
        return np.ones(field.grid.n_phi)
    return np.asarray(field.r_of_phi, dtype=float) / field.r_avg


def engrave_small_angle(
    scheme: LevelScheme,
    field: ExcitationField,
    medium: MediumSpec,
    n_z: int = DEFAULT_N_Z,
    allow_misaligned: bool = False,
    saturated: bool = False,
) -> GratingProfile:
    """March the pointwise intensity equation through the medium.

    The local reduced rate is tied to the local spectral intensity with
    the proportionality fixed at the entrance: r(z,phi) = <r> I(z,phi)
    with I(0,phi) = r(0,phi)/<r>.  With ``saturated=True`` the sublevel
    steady state is taken in its strong-drive limit (entrance contrast 2).
    Raises :class:`ConvergenceError` when halving the depth step changes
    the profile by more than 1e-6 alpha0.
    """
    if n_z < 50:
        raise ValueError("n_z must be >= 50")
    _require_aligned(scheme, field, allow_misaligned)
    drive, kind = _march_setup(scheme, field, saturated)
    if saturated and field.r_avg == 0.0:
        raise ValueError(
            "saturated engraving needs a shaped pump; any positive r_avg fixes "
            "the shape (its magnitude is ignored)"
        )
    i0 = _entrance_intensity(field)
    shift = field.replica_shift_bins
    alpha, inten = _kernels.small_angle_march(
        i0, drive, shift, kind, medium.alpha0, medium.length, n_z
    )
    alpha_fine, _ = _kernels.small_angle_march(
        i0, drive, shift, kind, medium.alpha0, medium.length, 2 * n_z
    )
    err = float(np.max(np.abs(alpha - alpha_fine[::2]))) / medium.alpha0
    if err > HALVING_TOL:
        raise ConvergenceError(
            f"depth march not converged: halving the step moves the profile by "
            f"{err:.3g} alpha0 (n_z={n_z})"
        )
    return GratingProfile(
        z=np.linspace(0.0, medium.length, n_z + 1),
        grid=field.grid,
        alpha=alpha,
        alpha0=medium.alpha0,
        scheme_kind=scheme.kind,
        regime="small-angle",
        intensity=inten,
    )


@dataclass(frozen=True)
class LargeAngleEngraving:
    """Result of a two-mode engraving march."""

    profile: GratingProfile
    fourier: FourierGrating
    e0: np.ndarray  # complex mode amplitudes along z
    e1: np.ndarray


def engrave_large_angle(
    scheme: LevelScheme,
    field: ExcitationField,
    medium: MediumSpec,
    n_z: int = DEFAULT_N_Z,
    e0_in: complex = 1.0,
    e1_in: complex = 1.0,
    allow_misaligned: bool = False,
    saturated: bool = False,
) -> LargeAngleEngraving:
    """March the two propagating mode amplitudes through the medium.

    The local rate is proportional to |E0 + E1 exp(-i phi)|^2, normalized
    so its entrance phi-average is the field's <r>; only the mean
    absorption and its first phase harmonic act back on the modes, so the
    excitation stays sinusoidal at every depth.  ``saturated=True``
    selects the strong-drive limit of the sublevel steady state.
    """
    if n_z < 50:
        raise ValueError("n_z must be >= 50")
    _require_aligned(scheme, field, allow_misaligned)
    drive, kind = _march_setup(scheme, field, saturated)
    shift = field.replica_shift_bins
    n_phi = field.grid.n_phi
    args = (drive, shift, kind, medium.alpha0, medium.length)
    alpha, e0, e1, a0, a1 = _kernels.large_angle_march(
        *args, n_z, n_phi, complex(e0_in), complex(e1_in)
    )
    alpha_fine = _kernels.large_angle_march(
        *args, 2 * n_z, n_phi, complex(e0_in), complex(e1_in)
    )[0]
    err = float(np.max(np.abs(alpha - alpha_fine[::2]))) / medium.alpha0
    if err > HALVING_TOL:
        raise ConvergenceError(
            f"depth march not converged: halving the step moves the profile by "
            f"{err:.3g} alpha0 (n_z={n_z})"
        )
    z = np.linspace(0.0, medium.length, n_z + 1)
    profile = GratingProfile(
        z=z,
        grid=field.grid,
        alpha=alpha,
        alpha0=medium.alpha0,
        scheme_kind=scheme.kind,
        regime="large-angle",
    )
    fourier = FourierGrating(z=z, coeffs=np.stack([a0.astype(complex), a1], axis=1))
    return LargeAngleEngraving(profile=profile, fourier=fourier, e0=e0, e1=e1)


def fourier_coefficients(profile: GratingProfile, p_max: int = 1) -> FourierGrating:
    """Discrete phase-harmonic decomposition of a grating profile.

    Exact for band-limited profiles; ``p_max`` must stay below the grid
    Nyquist order n_phi/2.
    """
    n_phi = profile.grid.n_phi
    if p_max >= n_phi // 2:
        raise GridResolutionError(
            f"p_max={p_max} aliases on an n_phi={n_phi} grid (limit {n_phi // 2 - 1})"
        )
    if p_max < 0:
        raise ValueError("p_max must be >= 0")
    phases = np.exp(1j * np.outer(np.arange(p_max + 1), profile.grid.phi))
    coeffs = profile.alpha @ phases.T / n_phi
    return FourierGrating(z=profile.z, coeffs=coeffs)


def ideal_grating(
    kind: str,
    medium: MediumSpec,
    grid: Optional[PhaseGrid] = None,
    n_z: int = DEFAULT_N_Z,
) -> GratingProfile:
    """Depth-uniform reference gratings of contrast 2.

    ``sinusoidal``: alpha0 (1 + sin phi).  ``square``: alpha0
    (1 + sign(sin phi)), where sign(0) = 0 leaves alpha0 at the nodes.
    """
    grid = grid or PhaseGrid()
    if kind == "sinusoidal":
        row = medium.alpha0 * (1.0 + np.sin(grid.phi))
    elif kind == "square":
        # clip the roundoff of sin at the nodes so sign(0) = 0 holds there
        s = np.sin(grid.phi)
        s[np.abs(s) < 1e-12] = 0.0
        row = medium.alpha0 * (1.0 + np.sign(s))
    else:
        raise ValueError(f"unknown ideal grating kind {kind!r}")
    alpha = np.tile(row, (n_z + 1, 1))
    return GratingProfile(
        z=np.linspace(0.0, medium.length, n_z + 1),
        grid=grid,
        alpha=alpha,
        alpha0=medium.alpha0,
        scheme_kind="ideal",
        regime="uniform-ideal",
    )


def engraving_field(grid: PhaseGrid, scheme: LevelScheme, drive: float) -> ExcitationField:
    """Sinusoidal pump whose dimensionless drive (zeta<r> or xi<r>) is given."""
    coeff = drive_coefficient(scheme)
    return sinusoidal_pump(grid, drive / coeff)
