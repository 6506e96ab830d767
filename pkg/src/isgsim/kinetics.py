"""Level schemes and optical-pumping kinetics.

Three pumping topologies are modeled:

* :class:`Standard3` -- ground |1>, excited |2> and a shelving metastable
  |m> outside the pumped bandwidth.  Reduced pumping rate ``r = R/gamma_m``.
* :class:`Lambda3` -- two long-lived ground sublevels |1>, |3> sharing one
  upper level |2>.  Reduced rates ``r = R/gamma_e``, ``r' = R'/gamma_e``.
* :class:`Tm5` -- two quasi-independent optical transitions |1>-|2> and
  |3>-|4> coupled through a shared metastable |m> and slow ground-state
  relaxation.  Reduced rates as for :class:`Lambda3`.

The closed-form steady states implemented by :func:`steady_state` are
exact solutions of the weak-field ground-state kinetics (excited and
metastable populations adiabatically eliminated for the sublevel schemes).
:func:`transient_oracle` integrates those kinetics by brute force and, on
request, the complete level systems including the metastable reservoir,
so the accumulation regime where the closed forms break down is
observable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels
from .errors import ConvergenceError, GridResolutionError, SchemeMismatchError

TM_YAG_GAMMA_E = 1.0 / 800e-6  # total upper-state decay rate, s^-1


@dataclass(frozen=True)
class Standard3:
    """Three-level shelving scheme: pump |1>->|2>, storage in |m>.

    ``gamma_a``: |2>->|1> decay (s^-1), ``gamma_b``: |2>->|m> branching
    (s^-1), ``gamma_m``: slow |m>->|1> return (s^-1).
    """

    gamma_a: float
    gamma_b: float
    gamma_m: float

    def __post_init__(self):
        if self.gamma_a <= 0 or self.gamma_b <= 0 or self.gamma_m <= 0:
            raise ValueError("Standard3 rates must be strictly positive")
        if self.gamma_m / self.gamma_e >= 0.1:
            warnings.warn(
                "gamma_m/gamma_e = %.3g; the shelving level is not slow "
                "compared to the upper-state decay" % (self.gamma_m / self.gamma_e),
                stacklevel=2,
            )

    @property
    def gamma_e(self) -> float:
        return self.gamma_a + self.gamma_b

    @property
    def kind(self) -> str:
        return "standard3"


@dataclass(frozen=True)
class Lambda3:
    """Lambda scheme: sublevels |1>, |3> (splitting ``delta_g`` in Hz) with
    one upper level |2> decaying at total rate ``gamma_e``; ``gamma_z`` is
    the ground-sublevel relaxation rate."""

    gamma_e: float
    gamma_z: float
    delta_g: float

    def __post_init__(self):
        if self.gamma_e <= 0 or self.gamma_z <= 0 or self.delta_g <= 0:
            raise ValueError("Lambda3 rates and splitting must be strictly positive")
        if self.gamma_z >= self.gamma_e:
            raise ValueError("Lambda3 requires gamma_z < gamma_e")

    @property
    def kind(self) -> str:
        return "lambda3"

    @property
    def replica_splitting(self) -> float:
        """Frequency offset between the two pumped transitions (Hz)."""
        return self.delta_g


@dataclass(frozen=True)
class Tm5:
    """Five-level thulium-like scheme.

    Each excited level decays to its own ground at ``gamma_a``, to the
    metastable at ``gamma_b`` and to the opposite ground at ``gamma_c``
    (spin-flipping, >= 0).  The metastable returns at ``gamma_m`` with
    equal branching to |1> and |3>.  Ground and excited splittings
    ``delta_g``/``delta_e`` are in Hz; the two optical transitions are
    offset by ``delta_ge = delta_g - delta_e``.
    """

    gamma_a: float
    gamma_b: float
    gamma_c: float
    gamma_m: float
    gamma_z: float
    delta_g: float
    delta_e: float

    def __post_init__(self):
        if self.gamma_a <= 0 or self.gamma_b <= 0 or self.gamma_m <= 0 or self.gamma_z <= 0:
            raise ValueError("Tm5 rates must be strictly positive")
        if self.gamma_c < 0:
            raise ValueError("Tm5 requires gamma_c >= 0")
        if self.gamma_z >= self.gamma_e:
            raise ValueError("Tm5 requires gamma_z < gamma_e")
        if self.gamma_m / self.gamma_e >= 0.1:
            warnings.warn(
                "gamma_m/gamma_e = %.3g; the metastable level is not slow "
                "compared to the upper-state decay" % (self.gamma_m / self.gamma_e),
                stacklevel=2,
            )

    @property
    def gamma_e(self) -> float:
        return self.gamma_a + self.gamma_b + self.gamma_c

    @property
    def delta_ge(self) -> float:
        return self.delta_g - self.delta_e

    @property
    def kind(self) -> str:
        return "tm5"

    @property
    def replica_splitting(self) -> float:
        """Frequency offset between the two pumped transitions (Hz)."""
        return self.delta_ge


LevelScheme = Union[Standard3, Lambda3, Tm5]


def tm_yag_standard() -> Standard3:
    """Tm:YAG rates with the metastable level used as storage."""
    ge = TM_YAG_GAMMA_E
    return Standard3(gamma_a=ge / 4.0, gamma_b=3.0 * ge / 4.0, gamma_m=1.0 / 10e-3)


def tm_yag_isg() -> Tm5:
    """Tm:YAG under a weak magnetic field: Zeeman sublevel storage."""
    ge = TM_YAG_GAMMA_E
    return Tm5(
        gamma_a=ge / 4.0,
        gamma_b=3.0 * ge / 4.0,
        gamma_c=0.0,
        gamma_m=1.0 / 10e-3,
        gamma_z=1.0 / 5.0,
        delta_g=600e3,
        delta_e=100e3,
    )


def tm_yag_lambda() -> Lambda3:
    """Lambda reduction of the Tm:YAG sublevel system (frequency-domain scans)."""
    return Lambda3(gamma_e=TM_YAG_GAMMA_E, gamma_z=1.0 / 5.0, delta_g=600e3)


PRESETS = {
    "tmyag-standard": tm_yag_standard,
    "tmyag-isg": tm_yag_isg,
    "tmyag-lambda": tm_yag_lambda,
}


def zeta(scheme: LevelScheme) -> float:
    """Pumping-efficiency ratio of the standard scheme: (gamma_b + 2 gamma_m)/gamma_e."""
    if not isinstance(scheme, Standard3):
        raise SchemeMismatchError("zeta is defined for the Standard3 scheme only")
    return (scheme.gamma_b + 2.0 * scheme.gamma_m) / scheme.gamma_e


def xi(scheme: LevelScheme) -> float:
    """Storage-efficiency ratio of the sublevel schemes.

    Lambda3: gamma_e/(2 gamma_z).  Tm5: (gamma_b/2 + gamma_c)/(2 gamma_z),
    the effective ground-to-ground transfer rate per unit pump over the
    sublevel relaxation.
    """
    if isinstance(scheme, Lambda3):
        return scheme.gamma_e / (2.0 * scheme.gamma_z)
    if isinstance(scheme, Tm5):
        return (scheme.gamma_b / 2.0 + scheme.gamma_c) / (2.0 * scheme.gamma_z)
    raise SchemeMismatchError("xi is defined for sublevel schemes (Lambda3/Tm5)")


def drive_coefficient(scheme: LevelScheme) -> float:
    """zeta for Standard3, xi for the sublevel schemes."""
    return zeta(scheme) if isinstance(scheme, Standard3) else xi(scheme)


def _check_rates(r, r_prime):
    r = np.asarray(r, dtype=float)
    rp = np.asarray(r_prime, dtype=float)
    if np.any(r < 0) or np.any(rp < 0):
        raise ValueError("reduced pumping rates must be >= 0")
    return r, rp


def steady_state(scheme: LevelScheme, r, r_prime=0.0):
    """Steady-state population differences for reduced pumping rates.

    Standard3 returns Delta_n12 = 1/(1 + zeta r) (``r_prime`` ignored).
    Sublevel schemes return the pair (Delta_n12, Delta_n32-or-34):
    (1/2 + xi r')/(1 + xi (r + r')) and (1/2 + xi r)/(1 + xi (r + r')).
    Scalar inputs give floats; arrays broadcast.
    """
    r, rp = _check_rates(r, r_prime)
    scalar = r.ndim == 0 and rp.ndim == 0
    if isinstance(scheme, Standard3):
        d = 1.0 / (1.0 + zeta(scheme) * r)
        return float(d) if scalar else d
    x = xi(scheme)
    den = 1.0 + x * (r + rp)
    d_first = (0.5 + x * rp) / den
    d_second = (0.5 + x * r) / den
    if scalar:
        return float(d_first), float(d_second)
    return d_first, d_second


def absorption(
    scheme: LevelScheme,
    alpha0: float,
    d_first,
    d_second=None,
    shift_bins=0,
    periodic: bool = True,
):
    """Compose an absorption spectrum from population-difference profiles.

    Standard3: ``alpha = alpha0 * d_first``.  Sublevel schemes add the
    second difference evaluated ``shift_bins`` grid bins up-frequency
    (``alpha0 * [d_first(k) + d_second(k + shift)]``): circularly on
    periodic grids, with equilibrium fill (1/2) and a truncation warning
    on finite grids.
    """
    d_first = np.asarray(d_first, dtype=float)
    if isinstance(scheme, Standard3):
        if d_second is not None:
            raise SchemeMismatchError("Standard3 absorption takes a single profile")
        return alpha0 * d_first

    if d_second is None:
        raise SchemeMismatchError("sublevel absorption needs both population differences")
    d_second = np.asarray(d_second, dtype=float)
    if d_second.shape != d_first.shape:
        raise ValueError("population-difference profiles must share one grid")
    s = float(shift_bins)
    if abs(s - round(s)) > 1e-9:
        raise GridResolutionError(
            f"shift of {shift_bins} bins is not an integer number of grid bins"
        )
    s = int(round(s))
    if periodic:
        shifted = np.roll(d_second, -s)
    else:
        shifted = np.full_like(d_second, 0.5)
        n = d_second.shape[-1]
        if s >= 0:
            if s < n:
                shifted[..., : n - s] = d_second[..., s:]
        else:
            if -s < n:
                shifted[..., -s:] = d_second[..., : n + s]
        if s != 0:
            warnings.warn(
                "finite grid: %d edge bins filled with the equilibrium value 1/2"
                % abs(s),
                stacklevel=2,
            )
    return alpha0 * (d_first + shifted)


@dataclass(frozen=True)
class MarginReport:
    """Weak-field validity diagnostics for a peak pumping rate.

    Ratios <= 1 pass, larger values only warn: the engraving routines
    never refuse to run in a saturated regime.
    """

    scheme_kind: str
    rate_peak: float  # peak pumping rate over phi, s^-1
    saturation_ratio: float  # rate_peak / (gamma_e / 2)
    metastable_ratio: float | None  # Tm5 only: rate_peak / (gamma_m gamma_e / gamma_b)
    drive: float  # zeta<r> or xi<r> implied by the phi-average rate
    drive_limit: float  # headline operating point (0.9 standard, 30 sublevel)
    drive_bound: float  # saturation bound expressed on the same drive scale

    @property
    def saturation_pass(self) -> bool:
        return self.saturation_ratio <= 1.0

    @property
    def metastable_pass(self) -> bool | None:
        if self.metastable_ratio is None:
            return None
        return self.metastable_ratio <= 1.0

    @property
    def drive_pass(self) -> bool:
        return self.drive <= self.drive_limit * (1.0 + 1e-12)

    @property
    def saturation_margin(self) -> float:
        """How far the phi-averaged drive sits below the saturation bound."""
        return math.inf if self.drive == 0 else self.drive_bound / self.drive


def weak_field_margins(scheme: LevelScheme, rate_peak: float) -> MarginReport:
    """Report how a peak pumping rate (s^-1, i.e. 2<R> for a sinusoidal
    drive) compares against the rate-equation validity bounds.

    ``saturation_ratio`` checks rate_peak against gamma_e/2; for Tm5,
    ``metastable_ratio`` additionally checks against gamma_m gamma_e /
    gamma_b, the bound keeping the metastable reservoir empty.
    """
    if rate_peak < 0:
        raise ValueError("rate_peak must be >= 0")
    ge = scheme.gamma_e
    sat = rate_peak / (ge / 2.0)
    rate_avg = rate_peak / 2.0
    meta = None
    if isinstance(scheme, Standard3):
        per_rate = zeta(scheme) / scheme.gamma_m
        limit = 0.9
    else:
        per_rate = xi(scheme) / ge
        limit = 30.0
        if isinstance(scheme, Tm5):
            meta = rate_peak / (scheme.gamma_m * ge / scheme.gamma_b)
    return MarginReport(
        scheme_kind=scheme.kind,
        rate_peak=rate_peak,
        saturation_ratio=sat,
        metastable_ratio=meta,
        drive=per_rate * rate_avg,
        drive_limit=limit,
        drive_bound=per_rate * ge / 2.0,
    )


@dataclass(frozen=True)
class PopulationState:
    """Occupation fractions per level at the end of a transient run."""

    scheme_kind: str
    fractions: dict
    sum_drift: float = 0.0  # worst |sum - 1| seen during integration

    def __post_init__(self):
        total = sum(self.fractions.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"populations sum to {total!r}, not 1")
        for label, value in self.fractions.items():
            if value < -1e-12 or value > 1.0 + 1e-12:
                raise ValueError(f"population n_{label} = {value!r} outside [0, 1]")

    def n(self, label: str) -> float:
        return self.fractions[label]

    def differences(self):
        """The scheme's canonical population differences.

        Standard3: (n1 - n2,).  Lambda3: (n1 - n2, n3 - n2).
        Tm5: (n1 - n2, n3 - n4).
        """
        f = self.fractions
        if self.scheme_kind == "standard3":
            return (f["1"] - f["2"],)
        if self.scheme_kind == "lambda3":
            return (f["1"] - f["2"], f["3"] - f["2"])
        return (f["1"] - f["2"], f["3"] - f["4"])


def _rate_matrix(scheme, r, r_prime, full_levels):
    """Rate matrix, equilibrium vector and level labels for one scheme."""
    if isinstance(scheme, Standard3):
        rate = r * scheme.gamma_m
        ga, gb, ge, gm = scheme.gamma_a, scheme.gamma_b, scheme.gamma_e, scheme.gamma_m
        mat = np.array(
            [
                [-rate, rate + ga, gm],
                [rate, -rate - ge, 0.0],
                [0.0, gb, -gm],
            ]
        )
        n0 = np.array([1.0, 0.0, 0.0])
        return mat, n0, ("1", "2", "m")

    if isinstance(scheme, Lambda3):
        rate = r * scheme.gamma_e
        rate_p = r_prime * scheme.gamma_e
        ge, gz = scheme.gamma_e, scheme.gamma_z
        if full_levels:
            mat = np.array(
                [
                    [-rate - gz / 2.0, rate + ge / 2.0, gz / 2.0],
                    [rate, -rate - rate_p - ge, rate_p],
                    [gz / 2.0, rate_p + ge / 2.0, -rate_p - gz / 2.0],
                ]
            )
            n0 = np.array([0.5, 0.0, 0.5])
            return mat, n0, ("1", "2", "3")
        # Ground-state kinetics: upper level eliminated, equal branching
        # turns the pump into a transfer at rate R/2; the sublevel exchange
        # proceeds at gamma_z/2 per direction.
        t, tp = rate / 2.0, rate_p / 2.0
        g = gz / 2.0
        mat = np.array([[-(t + g), tp + g], [t + g, -(tp + g)]])
        n0 = np.array([0.5, 0.5])
        return mat, n0, ("1", "3")

    rate = r * scheme.gamma_e
    rate_p = r_prime * scheme.gamma_e
    ga, gb, gc = scheme.gamma_a, scheme.gamma_b, scheme.gamma_c
    ge, gm, gz = scheme.gamma_e, scheme.gamma_m, scheme.gamma_z
    if full_levels:
        mat = np.array(
            [
                [-rate - gz, rate + ga, gz, gc, gm / 2.0],
                [rate, -rate - ge, 0.0, 0.0, 0.0],
                [gz, gc, -rate_p - gz, rate_p + ga, gm / 2.0],
                [0.0, 0.0, rate_p, -rate_p - ge, 0.0],
                [0.0, gb, 0.0, gb, -gm],
            ]
        )
        n0 = np.array([0.5, 0.0, 0.5, 0.0, 0.0])
        return mat, n0, ("1", "2", "3", "4", "m")
    # Ground-state kinetics: pumping one transition transfers population to
    # the opposite ground at rate R (gamma_b/2 + gamma_c)/gamma_e (half of
    # the metastable branch plus the direct spin flip); sublevel exchange
    # at gamma_z per direction.
    t = rate * (gb / 2.0 + gc) / ge
    tp = rate_p * (gb / 2.0 + gc) / ge
    mat = np.array([[-(t + gz), tp + gz], [t + gz, -(tp + gz)]])
    n0 = np.array([0.5, 0.5])
    return mat, n0, ("1", "3")


def _slowest_rate(mat: np.ndarray) -> float:
    """Relaxation rate of the slowest non-conserved mode of dn/dt = M n."""
    rates = np.sort(np.abs(np.linalg.eigvals(mat).real))
    scale = rates[-1] if rates[-1] > 0 else 1.0
    for rate in rates:
        if rate > 1e-12 * scale:
            return float(rate)
    return float(scale)


def transient_oracle(
    scheme: LevelScheme,
    r: float,
    r_prime: float = 0.0,
    t_end: float | None = None,
    full_levels: bool = False,
    max_steps: int = 200_000_000,
) -> PopulationState:
    """Integrate the rate equations from the unpumped equilibrium.

    With ``full_levels=False`` (default) the sublevel schemes use the
    ground-state kinetics whose exact steady states are the closed forms
    of :func:`steady_state`; ``full_levels=True`` integrates the complete
    level systems including the excited states and, for Tm5, the
    metastable reservoir with its 50/50 return branching.  Standard3 is
    always the full three-level system (its closed form is exact there).

    Fixed-step RK4 with step 0.01 over the fastest rate in the system.
    Raises :class:`ConvergenceError` when the populations still move by
    more than 1e-9 between t_end/10 and t_end.
    """
    r = float(r)
    r_prime = float(r_prime)
    if r < 0 or r_prime < 0:
        raise ValueError("reduced pumping rates must be >= 0")
    mat, n0, labels = _rate_matrix(scheme, r, r_prime, full_levels)
    rate_scale = float(np.max(np.abs(np.diag(mat))))
    if rate_scale == 0.0:
        rate_scale = scheme.gamma_e
    if t_end is None:
        t_end = 240.0 / _slowest_rate(mat)
    h = 0.01 / rate_scale
    n_steps = max(int(math.ceil(t_end / h)), 10)
    if n_steps > max_steps:
        raise ValueError(
            f"{n_steps} fixed steps needed for t_end={t_end:g}; pass a smaller "
            "t_end or raise max_steps"
        )
    h = t_end / n_steps
    check_step = max(n_steps // 10, 1)
    final, at_check, drift = _kernels.rate_rk4(
        np.ascontiguousarray(mat), n0, h, n_steps, check_step
    )
    change = float(np.max(np.abs(final - at_check)))
    if change > 1e-9:
        raise ConvergenceError(
            f"populations still moving by {change:.3g} over the last decade "
            f"of integration (t_end={t_end:g})"
        )
    fractions = {}
    for label, value in zip(labels, final):
        fractions[label] = float(value)
    if isinstance(scheme, Lambda3) and not full_levels:
        fractions["2"] = 0.0
    if isinstance(scheme, Tm5) and not full_levels:
        fractions["2"] = 0.0
        fractions["4"] = 0.0
        fractions["m"] = 0.0
    return PopulationState(scheme_kind=scheme.kind, fractions=fractions, sum_drift=drift)
