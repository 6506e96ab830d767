"""Weak-probe propagation through an engraved grating.

The probe enters along the zeroth order with unit amplitude; the grating's
first phase harmonic feeds the first diffracted order:

    dE0/dz = -alpha0(z)/2 E0
    dE1/dz = -alpha0(z)/2 E1 - alpha1(z) E0,      E1(0) = 0

and the efficiency is eta = |E1(L)|^2.  For depth-uniform coefficients the
pair integrates in closed form to eta = (|alpha1| L)^2 exp(-alpha0 L),
kept as an independent check of the numerical integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import _kernels
from .engraving import (
    DEFAULT_N_Z,
    FourierGrating,
    HALVING_TOL,
    MediumSpec,
    engrave_large_angle,
    engrave_small_angle,
    fourier_coefficients,
)
from .errors import ConvergenceError
from .excitation import PhaseGrid, sinusoidal_pump
from .kinetics import LevelScheme

#: RK4 substeps per coefficient sample interval of the probe march
PROBE_SUBSTEPS = 2


@dataclass(frozen=True)
class ProbeResult:
    """First-order diffraction of a weak probe (amplitudes at z = L,
    normalized to unit input)."""

    eta: float
    e0_out: complex
    e1_out: complex

    @property
    def transmission(self) -> float:
        """Zeroth-order power transmission |E0(L)|^2."""
        return abs(self.e0_out) ** 2


def probe_efficiency(grating: FourierGrating) -> ProbeResult:
    """Integrate the probe equations through sampled coefficients.

    Raises :class:`ConvergenceError` if halving the integration step moves
    the efficiency by a relative 1e-6.
    """
    z = np.ascontiguousarray(grating.z)
    a0 = np.ascontiguousarray(grating.a0)
    a1 = np.ascontiguousarray(grating.a1)
    e0, e1 = _kernels.probe_march(z, a0, a1, PROBE_SUBSTEPS)
    e0_fine, e1_fine = _kernels.probe_march(z, a0, a1, 2 * PROBE_SUBSTEPS)
    eta = abs(e1) ** 2
    eta_fine = abs(e1_fine) ** 2
    if abs(eta - eta_fine) > HALVING_TOL * max(eta, 1e-6):
        raise ConvergenceError(
            f"probe march not converged: step halving moves eta by "
            f"{abs(eta - eta_fine):.3g}"
        )
    return ProbeResult(eta=eta, e0_out=e0, e1_out=e1)


def eta_uniform(alpha0_coeff: float, alpha1_coeff: float, length: float) -> float:
    """Closed-form efficiency of a depth-uniform grating:
    (|alpha1| L)^2 exp(-alpha0 L)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    return (abs(alpha1_coeff) * length) ** 2 * math.exp(-alpha0_coeff * length)


@dataclass(frozen=True)
class EfficiencyCurve:
    """Diffraction efficiency versus a swept parameter."""

    param: str  # "od" (alpha0 L) or "drive" (zeta<r> / xi<r>)
    values: np.ndarray
    eta: np.ndarray
    scheme_kind: str
    regime: str
    meta: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        eta = np.asarray(self.eta, dtype=float)
        if values.shape != eta.shape:
            raise ValueError("values and eta must align")
        for name, arr in (("values", values), ("eta", eta)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def max_eta(self) -> float:
        return float(self.eta.max())

    @property
    def argmax_value(self) -> float:
        return float(self.values[int(np.argmax(self.eta))])

    def to_csv(self, stream) -> None:
        stream.write(f"{self.param},eta,regime,scheme\n")
        for v, e in zip(self.values, self.eta):
            stream.write(
                f"{float(v)!r},{float(e)!r},{self.regime},{self.scheme_kind}\n"
            )


def engrave_and_probe(
    scheme: LevelScheme,
    r_avg: float,
    medium: MediumSpec,
    regime: str,
    grid: PhaseGrid | None = None,
    n_z: int = DEFAULT_N_Z,
    saturated: bool = False,
) -> ProbeResult:
    """Engrave a sinusoidally pumped grating and probe it."""
    grid = grid or PhaseGrid()
    field = sinusoidal_pump(grid, r_avg)
    if regime == "small-angle":
        profile = engrave_small_angle(scheme, field, medium, n_z=n_z, saturated=saturated)
        grating = fourier_coefficients(profile, p_max=1)
    elif regime == "large-angle":
        grating = engrave_large_angle(
            scheme, field, medium, n_z=n_z, saturated=saturated
        ).fourier
    else:
        raise ValueError(f"unknown regime {regime!r} (small-angle or large-angle)")
    return probe_efficiency(grating)


def efficiency_vs_depth(
    scheme: LevelScheme,
    r_avg: float,
    regime: str,
    od_values,
    grid: PhaseGrid | None = None,
    n_z: int = DEFAULT_N_Z,
    saturated: bool = False,
) -> EfficiencyCurve:
    """Engrave-and-probe across a sweep of initial optical depths."""
    od_values = np.asarray(od_values, dtype=float)
    if np.any(od_values <= 0):
        raise ValueError("optical depths must be > 0")
    etas = np.empty_like(od_values)
    for i, od in enumerate(od_values):
        medium = MediumSpec(alpha0=od, length=1.0)
        etas[i] = engrave_and_probe(
            scheme, r_avg, medium, regime, grid, n_z, saturated
        ).eta
    return EfficiencyCurve(
        param="od",
        values=od_values,
        eta=etas,
        scheme_kind=scheme.kind,
        regime=regime,
        meta={"r_avg": r_avg, "saturated": saturated},
    )


def efficiency_vs_power(
    scheme: LevelScheme,
    r_values,
    od: float,
    regime: str,
    grid: PhaseGrid | None = None,
    n_z: int = DEFAULT_N_Z,
) -> EfficiencyCurve:
    """Engrave-and-probe across a sweep of average reduced pumping rates
    at fixed optical depth."""
    r_values = np.asarray(r_values, dtype=float)
    if np.any(r_values < 0):
        raise ValueError("reduced rates must be >= 0")
    medium = MediumSpec(alpha0=od, length=1.0)
    etas = np.empty_like(r_values)
    for i, r_avg in enumerate(r_values):
        etas[i] = engrave_and_probe(scheme, float(r_avg), medium, regime, grid, n_z).eta
    return EfficiencyCurve(
        param="drive",
        values=r_values,
        eta=etas,
        scheme_kind=scheme.kind,
        regime=regime,
        meta={"od": od},
    )
