"""Pumping-rate profiles over the spectro-spatial phase or the frequency axis.

Two working domains:

* the periodic phase domain ``phi = 2*pi*nu*tau + K.x`` on a uniform grid
  over [0, 2*pi), used by every engraving and efficiency computation
  (idealized infinitely broad pump spectrum);
* a finite frequency domain, used only for replica-alignment scans with a
  finite-bandwidth pulse-pair spectrum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .errors import GridResolutionError, SchemeMismatchError
from .kinetics import LevelScheme, Standard3, absorption, steady_state, xi


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform periodic grid of ``n_phi`` samples, phi_k = 2 pi k / n_phi."""

    n_phi: int = 256

    def __post_init__(self):
        if self.n_phi < 16 or self.n_phi % 2 != 0:
            raise GridResolutionError("n_phi must be even and >= 16")

    @cached_property
    def phi(self) -> np.ndarray:
        values = 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi
        values.setflags(write=False)
        return values

    def bins_for_fraction(self, shift: float) -> int:
        """Grid bins for a shift given as a fraction of the 2*pi period."""
        bins = shift * self.n_phi
        if abs(bins - round(bins)) > 1e-9:
            raise GridResolutionError(
                f"shift {shift} of a period is {bins} bins on n_phi={self.n_phi}; "
                "choose n_phi so the shift is grid-exact"
            )
        return int(round(bins)) % self.n_phi


@dataclass(frozen=True)
class ExcitationField:
    """Reduced pumping rate r(phi) plus the grid rotation that produces the
    second-transition replica rate r'(phi) = r(phi - 2*pi*shift_bins/n_phi)."""

    grid: PhaseGrid
    r_of_phi: np.ndarray
    r_avg: float
    replica_shift_bins: int

    def __post_init__(self):
        values = np.asarray(self.r_of_phi, dtype=float)
        if values.shape != (self.grid.n_phi,):
            raise ValueError("r_of_phi must have one value per grid point")
        if np.any(values < 0):
            raise ValueError("pumping rates must be >= 0")
        if abs(float(values.mean()) - self.r_avg) > 1e-10 * max(1.0, self.r_avg):
            raise ValueError("mean of r_of_phi does not match r_avg")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "r_of_phi", values)

    @property
    def replica(self) -> np.ndarray:
        """r'(phi), the replica rate on the same grid."""
        return np.roll(self.r_of_phi, self.replica_shift_bins)


def sinusoidal_pump(grid: PhaseGrid, r_avg: float) -> ExcitationField:
    """Ideal pulse-pair drive r(phi) = <r> (1 + cos phi).

    The replica shift defaults to half a period (the aligned configuration
    where the replica sits in perfect antiphase).
    """
    if r_avg < 0:
        raise ValueError("r_avg must be >= 0")
    values = r_avg * (1.0 + np.cos(grid.phi))
    return ExcitationField(
        grid=grid,
        r_of_phi=values,
        r_avg=r_avg,
        replica_shift_bins=grid.n_phi // 2,
    )


def replica_field(field_in: ExcitationField, shift: float) -> ExcitationField:
    """Rotate a field by ``shift`` periods: r'(phi) = r(phi - 2*pi*shift)."""
    bins = field_in.grid.bins_for_fraction(shift)
    return replace(field_in, r_of_phi=np.roll(field_in.r_of_phi, bins))


@dataclass(frozen=True)
class PulsePairSpec:
    """Two identical-envelope pulses separated by ``delay``, repeated every
    ``period``; spectral fringe spacing 1/delay.

    ``pulse_duration`` is the full duration for rectangular envelopes and
    the FWHM for gaussian ones.  ``second_area=None`` means equal pulses;
    0 degenerates to a single pulse (pure envelope, no fringes).
    """

    envelope: str  # "rectangular" | "gaussian"
    pulse_area: float  # rad
    pulse_duration: float  # s
    delay: float  # s
    period: float  # s
    center_offset: float = 0.0  # Hz
    second_area: float | None = None

    def __post_init__(self):
        if self.envelope not in ("rectangular", "gaussian"):
            raise ValueError(f"unknown envelope {self.envelope!r}")
        if self.delay <= 0:
            raise ValueError("delay must be > 0")
        if self.pulse_duration <= 0 or self.pulse_area <= 0 or self.period <= 0:
            raise ValueError("pulse parameters must be > 0")
        if self.delay <= self.pulse_duration:
            raise ValueError("delay must exceed the pulse duration")
        if self.second_area is not None and self.second_area < 0:
            raise ValueError("second_area must be >= 0")

    @property
    def areas(self) -> tuple[float, float]:
        second = self.pulse_area if self.second_area is None else self.second_area
        return self.pulse_area, second

    @property
    def fringe_spacing(self) -> float:
        """Spectral period of the pair interference, Hz."""
        return 1.0 / self.delay

    @property
    def peak_spectral_intensity(self) -> float:
        """Peak |spectral pulse area|^2 of the pair; must stay << 1."""
        a1, a2 = self.areas
        return (a1 + a2) ** 2

    def validate_repetition(self, scheme: LevelScheme) -> None:
        if self.period < 2.0 / scheme.gamma_e:
            warnings.warn(
                "repetition period shorter than 2/gamma_e: atoms do not relax "
                "between pulse pairs",
                stacklevel=2,
            )

    def envelope_amplitude(self, nu) -> np.ndarray:
        """Normalized single-pulse spectral amplitude at frequency nu (Hz)."""
        nu = np.asarray(nu, dtype=float) - self.center_offset
        if self.envelope == "rectangular":
            return np.sinc(nu * self.pulse_duration)
        sigma_t = self.pulse_duration / (2.0 * math.sqrt(2.0 * math.log(2.0)))
        return np.exp(-2.0 * (np.pi * sigma_t * nu) ** 2)


def pulse_pair_spectrum(spec: PulsePairSpec, nu) -> np.ndarray:
    """Average pumping rate R(nu) in s^-1 produced by one pulse pair per
    repetition period: |pair spectral area|^2 / (4 T)."""
    nu = np.asarray(nu, dtype=float)
    if spec.peak_spectral_intensity >= 1.0:
        warnings.warn(
            "peak spectral intensity %.3g saturates the transition; the "
            "rate-equation description is invalid" % spec.peak_spectral_intensity,
            stacklevel=2,
        )
    a1, a2 = spec.areas
    env_sq = spec.envelope_amplitude(nu) ** 2
    fringes = a1**2 + a2**2 + 2.0 * a1 * a2 * np.cos(2.0 * np.pi * nu * spec.delay)
    return env_sq * fringes / (4.0 * spec.period)


@dataclass(frozen=True)
class ReplicaScanCurve:
    """One absorption profile of a replica-alignment scan."""

    ratio: float  # splitting over fringe spacing
    splitting: float  # Hz
    nu: np.ndarray
    alpha_over_alpha0: np.ndarray


def _shift_finite(values: np.ndarray, bins: int, fill: float) -> np.ndarray:
    """out[i] = values[i - bins], padding with ``fill`` at the edges."""
    out = np.full_like(values, fill)
    n = values.shape[0]
    if bins >= 0:
        if bins < n:
            out[bins:] = values[: n - bins]
    elif -bins < n:
        out[: n + bins] = values[-bins:]
    return out


def replica_alignment_scan(
    scheme: LevelScheme,
    spec: PulsePairSpec,
    ratios,
    r_scale: float,
    bins_per_period: int = 32,
    span_periods: float = 24.0,
) -> list[ReplicaScanCurve]:
    """Absorption profiles for several splitting-to-fringe-spacing ratios.

    The finite-bandwidth pump spectrum comes from ``spec``;
    ``r_scale`` (s) converts the pumping rate R(nu) to the reduced rate,
    e.g. ``1/gamma_e`` for the sublevel convention.  For each requested
    ratio the splitting is ratio / delay, the replica rate is the pump
    shifted down-frequency by that splitting (zero outside the grid), and
    the absorption is composed with the second population difference
    shifted up-frequency (equilibrium fill outside the grid).

    Every ratio must be grid-exact: ratio * bins_per_period integral.
    """
    if isinstance(scheme, Standard3):
        raise SchemeMismatchError("replica scans need a sublevel scheme")
    xi(scheme)  # raises for unsupported variants
    fringe = spec.fringe_spacing
    d_nu = fringe / bins_per_period
    half = int(round(span_periods * bins_per_period))
    nu = d_nu * np.arange(-half, half + 1)
    rate = pulse_pair_spectrum(spec, nu)
    r = r_scale * rate
    if np.any(r < 0):
        raise ValueError("negative reduced rates from r_scale")
    curves = []
    for ratio in ratios:
        bins = float(ratio) * bins_per_period
        if abs(bins - round(bins)) > 1e-9:
            raise GridResolutionError(
                f"ratio {ratio} is {bins} bins on bins_per_period={bins_per_period}"
            )
        bins = int(round(bins))
        r_rep = _shift_finite(r, bins, 0.0)
        d_first, d_second = steady_state(scheme, r, r_rep)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            alpha = absorption(
                scheme, 1.0, d_first, d_second, shift_bins=bins, periodic=False
            )
        curves.append(
            ReplicaScanCurve(
                ratio=float(ratio),
                splitting=float(ratio) * fringe,
                nu=nu,
                alpha_over_alpha0=alpha,
            )
        )
    return curves
