"""Command-line front end.

Subcommands: ``engrave`` (grating profile CSV), ``probe`` (efficiency
JSON), ``sweep`` (efficiency curve CSV), ``figure`` (reference datasets +
manifest), ``oracle`` (transient-vs-closed-form report) and ``validate``
(invariant suite).  Exit codes: 0 success, 1 numerical-convergence
failure, 2 configuration errors.

Configuration may come from a JSON file (``--config``); command-line
flags override file values.  Rates accept plain numbers (s^-1) or
``1/800us``-style strings; splittings are plain Hz.  ``ISGSIM_OUT_DIR``
sets the default output directory.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import bench
from .diffraction import (
    efficiency_vs_depth,
    efficiency_vs_power,
    engrave_and_probe,
    eta_uniform,
    probe_efficiency,
)
from .engraving import (
    MediumSpec,
    contrast,
    engrave_large_angle,
    engrave_small_angle,
    engraving_field,
    entrance_profile,
    fourier_coefficients,
    ideal_grating,
    max_phase_matched_order,
)
from .errors import ConvergenceError
from .excitation import PhaseGrid, sinusoidal_pump
from .kinetics import (
    Lambda3,
    PRESETS,
    Standard3,
    Tm5,
    drive_coefficient,
    steady_state,
    tm_yag_isg,
    tm_yag_standard,
    transient_oracle,
    xi,
    zeta,
)


class ConfigError(Exception):
    """Bad configuration: reported on stderr, exit code 2."""


_TIME_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9}
_RATE_RE = re.compile(r"^1\s*/\s*([0-9.eE+-]+)\s*(s|ms|us|µs|ns)$")


def parse_rate(value) -> float:
    """Rate in s^-1 from a number or a ``1/800us``-style string."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    match = _RATE_RE.match(text)
    if match:
        return 1.0 / (float(match.group(1)) * _TIME_UNITS[match.group(2)])
    try:
        return float(text)
    except ValueError:
        raise ConfigError(
            f"cannot parse rate {value!r}: use a number (s^-1) or '1/<time><unit>'"
        ) from None


def _scheme_from_mapping(data) -> object:
    variant = data.get("variant")
    try:
        if variant == "standard3":
            return Standard3(
                gamma_a=parse_rate(data["gamma_a"]),
                gamma_b=parse_rate(data["gamma_b"]),
                gamma_m=parse_rate(data["gamma_m"]),
            )
        if variant == "lambda3":
            return Lambda3(
                gamma_e=parse_rate(data["gamma_e"]),
                gamma_z=parse_rate(data["gamma_z"]),
                delta_g=float(data["delta_g"]),
            )
        if variant == "tm5":
            return Tm5(
                gamma_a=parse_rate(data["gamma_a"]),
                gamma_b=parse_rate(data["gamma_b"]),
                gamma_c=parse_rate(data.get("gamma_c", 0.0)),
                gamma_m=parse_rate(data["gamma_m"]),
                gamma_z=parse_rate(data["gamma_z"]),
                delta_g=float(data["delta_g"]),
                delta_e=float(data["delta_e"]),
            )
    except KeyError as exc:
        raise ConfigError(f"scheme field {exc} missing for variant {variant!r}") from None
    except ValueError as exc:
        raise ConfigError(f"invalid scheme: {exc}") from None
    raise ConfigError(
        f"unknown scheme variant {variant!r} (standard3, lambda3 or tm5)"
    )


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    return data


def _setting(args, config, name, default=None):
    attr = name.replace("-", "_")
    value = getattr(args, attr, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return config.get(attr, default)


def _resolve_scheme(args, config):
    preset = _setting(args, config, "preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r} (known: {', '.join(PRESETS)})")
        return PRESETS[preset]()
    scheme_cfg = config.get("scheme")
    if scheme_cfg is not None:
        return _scheme_from_mapping(scheme_cfg)
    raise ConfigError("no scheme: pass --preset or a 'scheme' object in the config")


def _resolve_drive(args, config, scheme):
    """(r_avg, saturated) from --xr/--zr/--r-avg/--saturated."""
    saturated = bool(_setting(args, config, "saturated", False))
    xr = _setting(args, config, "xr")
    zr = _setting(args, config, "zr")
    r_avg = _setting(args, config, "r-avg")
    given = [v for v in (xr, zr, r_avg) if v is not None]
    if len(given) > 1:
        raise ConfigError("pass only one of --xr, --zr, --r-avg")
    if saturated:
        if given:
            raise ConfigError("--saturated replaces the drive value")
        # magnitude is ignored in the saturated limit; 1.0 fixes the shape
        return 1.0, True
    if xr is not None:
        if isinstance(scheme, Standard3):
            raise ConfigError("--xr applies to sublevel schemes; use --zr")
        return float(xr) / xi(scheme), False
    if zr is not None:
        if not isinstance(scheme, Standard3):
            raise ConfigError("--zr applies to the standard scheme; use --xr")
        return float(zr) / zeta(scheme), False
    if r_avg is not None:
        return float(r_avg), False
    raise ConfigError("no drive: pass --xr, --zr, --r-avg or --saturated")


_REGIMES = {
    "small": "small-angle",
    "small-angle": "small-angle",
    "collinear": "small-angle",
    "large": "large-angle",
    "large-angle": "large-angle",
}


def _resolve_regime(args, config) -> str:
    regime = _setting(args, config, "regime")
    theta = _setting(args, config, "theta")
    if regime is not None and theta is not None:
        raise ConfigError("pass either --regime or the beam geometry, not both")
    if regime is not None:
        if regime not in _REGIMES:
            raise ConfigError(f"unknown regime {regime!r}")
        return _REGIMES[regime]
    if theta is not None:
        wavelength = _setting(args, config, "wavelength")
        length = _setting(args, config, "length")
        if wavelength is None or length is None:
            raise ConfigError("geometry regime needs --theta, --wavelength and --length")
        medium = MediumSpec(
            alpha0=1.0,
            length=float(length),
            wavelength=float(wavelength),
            theta=float(theta),
        )
        matched = max_phase_matched_order(medium)
        if matched.regime == "ambiguous":
            raise ConfigError(
                f"theta={theta} is neither clearly small nor large angle "
                f"(theta_c={matched.theta_c:.4g} rad); pick --regime explicitly"
            )
        return matched.regime
    raise ConfigError("no beam regime: pass --regime or --theta/--wavelength/--length")


def _resolve_grids(args, config) -> tuple[PhaseGrid, int]:
    n_phi = int(_setting(args, config, "nphi", 256))
    n_z = int(_setting(args, config, "nz", 400))
    try:
        grid = PhaseGrid(n_phi)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if n_z < 50:
        raise ConfigError("nz must be >= 50")
    return grid, n_z


def _out_dir(args, config) -> Path:
    out_dir = _setting(args, config, "out-dir")
    if out_dir is None:
        out_dir = os.environ.get("ISGSIM_OUT_DIR", ".")
    return Path(out_dir)


def _write_text(args, config, default_name: str, text: str, quiet: bool) -> None:
    out = _setting(args, config, "out")
    if out == "-":
        sys.stdout.write(text)
        return
    if out is None:
        path = _out_dir(args, config) / default_name
    else:
        path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    if not quiet:
        print(f"wrote {path}")


def _cmd_engrave(args, config) -> int:
    scheme = _resolve_scheme(args, config)
    grid, n_z = _resolve_grids(args, config)
    r_avg, saturated = _resolve_drive(args, config, scheme)
    regime = _resolve_regime(args, config)
    od = _setting(args, config, "od")
    if od is None:
        raise ConfigError("no optical depth: pass --od")
    medium = MediumSpec(alpha0=float(od), length=1.0)
    pump = sinusoidal_pump(grid, r_avg)
    if regime == "small-angle":
        profile = engrave_small_angle(scheme, pump, medium, n_z=n_z, saturated=saturated)
    else:
        profile = engrave_large_angle(
            scheme, pump, medium, n_z=n_z, saturated=saturated
        ).profile
    buf = io.StringIO()
    profile.to_csv(buf)
    _write_text(args, config, "profile.csv", buf.getvalue(), args.quiet)
    if not args.quiet:
        print(
            f"contrast: entrance {contrast(profile.entrance(), profile.alpha0):.4f}, "
            f"output {contrast(profile.output(), profile.alpha0):.4f}"
        )
    return 0


def _cmd_probe(args, config) -> int:
    grid, n_z = _resolve_grids(args, config)
    od = _setting(args, config, "od")
    if od is None:
        raise ConfigError("no optical depth: pass --od")
    ideal = _setting(args, config, "ideal")
    if ideal is not None:
        medium = MediumSpec(alpha0=float(od), length=1.0)
        grating = fourier_coefficients(ideal_grating(ideal, medium, grid, n_z))
        result = probe_efficiency(grating)
        context = {"grating": f"ideal-{ideal}", "od": float(od)}
    else:
        scheme = _resolve_scheme(args, config)
        r_avg, saturated = _resolve_drive(args, config, scheme)
        regime = _resolve_regime(args, config)
        medium = MediumSpec(alpha0=float(od), length=1.0)
        result = engrave_and_probe(
            scheme, r_avg, medium, regime, grid, n_z, saturated=saturated
        )
        context = {
            "grating": "engraved",
            "scheme": scheme.kind,
            "regime": regime,
            "od": float(od),
            "r_avg": r_avg,
            "saturated": saturated,
        }
    payload = dict(context)
    payload.update(
        {
            "eta": result.eta,
            "transmission": result.transmission,
            "e0_out": [result.e0_out.real, result.e0_out.imag],
            "e1_out": [result.e1_out.real, result.e1_out.imag],
        }
    )
    _write_text(
        args, config, "probe.json", json.dumps(payload, sort_keys=True) + "\n", args.quiet
    )
    return 0


def _cmd_sweep(args, config) -> int:
    scheme = _resolve_scheme(args, config)
    grid, n_z = _resolve_grids(args, config)
    regime = _resolve_regime(args, config)
    mode = _setting(args, config, "mode", "od")
    start = float(_setting(args, config, "start", 0.05))
    stop = float(_setting(args, config, "stop", 3.0))
    if mode == "od":
        r_avg, saturated = _resolve_drive(args, config, scheme)
        step = float(_setting(args, config, "step", 0.05))
        if step <= 0 or stop < start:
            raise ConfigError("need step > 0 and stop >= start")
        values = np.round(np.arange(start, stop + step / 2.0, step), 10)
        curve = efficiency_vs_depth(
            scheme, r_avg, regime, values, grid, n_z, saturated=saturated
        )
    elif mode == "drive":
        od = _setting(args, config, "od")
        if od is None:
            raise ConfigError("drive sweep needs --od")
        points = int(_setting(args, config, "points", 25))
        if points < 2 or start <= 0 or stop <= start:
            raise ConfigError("drive sweep needs 0 < start < stop and points >= 2")
        coeff = drive_coefficient(scheme)
        drives = np.geomspace(start, stop, points)
        curve = efficiency_vs_power(scheme, drives / coeff, float(od), regime, grid, n_z)
    else:
        raise ConfigError(f"unknown sweep mode {mode!r} (od or drive)")
    buf = io.StringIO()
    curve.to_csv(buf)
    _write_text(args, config, "sweep.csv", buf.getvalue(), args.quiet)
    if not args.quiet:
        print(f"max eta {curve.max_eta:.4f} at {curve.param}={curve.argmax_value:g}")
    return 0


def _cmd_figure(args, config) -> int:
    ids = list(bench.FIGURE_IDS) if args.id == "all" else [args.id]
    grid, _ = _resolve_grids(args, config)
    out = _out_dir(args, config)
    manifest = bench.write_datasets(ids, out, grid)
    if not args.quiet:
        print(f"wrote {manifest}")
    return 0


def _cmd_oracle(args, config) -> int:
    points = int(_setting(args, config, "points", 20))
    rng = np.random.RandomState(20240801)
    worst = 0.0
    lines = []
    std = tm_yag_standard()
    isg = tm_yag_isg()
    for label, scheme in (("standard3", std), ("tm5", isg)):
        coeff = drive_coefficient(scheme)
        dev = 0.0
        for _ in range(points):
            drive = 10.0 ** rng.uniform(-2, 3)
            drive_p = 10.0 ** rng.uniform(-2, 3)
            r = drive / coeff
            rp = drive_p / coeff if not isinstance(scheme, Standard3) else 0.0
            state = transient_oracle(scheme, r, rp)
            closed = steady_state(scheme, r, rp)
            if isinstance(scheme, Standard3):
                closed = (closed,)
            for got, want in zip(state.differences(), closed):
                dev = max(dev, abs(got - want))
        lines.append(f"{label}: max |oracle - closed form| = {dev:.3e} over {points} points")
        worst = max(worst, dev)
    verdict = "PASS" if worst < 1e-6 else "FAIL"
    lines.append(f"{verdict}: tolerance 1e-06")
    text = "\n".join(lines) + "\n"
    if _setting(args, config, "out") is not None:
        _write_text(args, config, "oracle.txt", text, args.quiet)
    else:
        sys.stdout.write(text)
    return 0 if worst < 1e-6 else 1


def _validation_checks():
    grid = PhaseGrid(256)
    isg = tm_yag_isg()
    std = tm_yag_standard()
    med2 = MediumSpec(alpha0=1.0, optical_depth=2.0)

    def closed_forms():
        sin_ok = abs(eta_uniform(1.0, 0.5, 2.0) - 0.1353) < 5e-4
        sq_ok = abs(eta_uniform(1.0, 2.0 / np.pi, 2.0) - 0.2194) < 5e-4
        return sin_ok and sq_ok, "uniform-grating closed forms at od 2"

    def probe_vs_closed():
        grating = fourier_coefficients(ideal_grating("sinusoidal", med2, grid))
        got = probe_efficiency(grating).eta
        want = eta_uniform(grating.a0[0], abs(grating.a1[0]), 2.0)
        return abs(got - want) <= 1e-6 * want, "probe ODE vs closed form (rel 1e-6)"

    def symmetry():
        pump = engraving_field(grid, isg, 30.0)
        profile = engrave_small_angle(isg, pump, med2)
        folded = profile.alpha + np.roll(profile.alpha, grid.n_phi // 2, axis=1)
        dev = float(np.max(np.abs(folded - 2.0 * profile.alpha0)))
        return dev < 1e-9, "sublevel symmetry alpha(phi) + alpha(phi+pi) = 2 alpha0"

    def conservation():
        state = transient_oracle(std, 1.1, full_levels=True)
        return state.sum_drift <= 1e-12, "population conservation (1e-12)"

    def oracle_equivalence():
        dev = 0.0
        for drive in (0.3, 3.0, 300.0):
            state = transient_oracle(isg, drive / xi(isg), 0.5 * drive / xi(isg))
            closed = steady_state(isg, drive / xi(isg), 0.5 * drive / xi(isg))
            dev = max(
                dev,
                max(abs(g - w) for g, w in zip(state.differences(), closed)),
            )
        return dev < 1e-6, "transient oracle vs closed forms (1e-6)"

    def passivity():
        result = engrave_and_probe(isg, 30.0 / xi(isg), med2, "large-angle", grid)
        return result.eta + result.transmission <= 1.0, "passivity eta + T0 <= 1"

    def entrance_contrasts():
        pump = engraving_field(grid, isg, 30.0)
        c_isg = contrast(entrance_profile(isg, pump), 1.0)
        pump_s = engraving_field(grid, std, 0.9)
        c_std = contrast(entrance_profile(std, pump_s), 1.0)
        ok = abs(c_isg - 4.0 * 30.0 / 61.0) < 1e-9 and abs(c_std - 1.8 / 2.8) < 1e-9
        return ok, "entrance contrast closed forms"

    def phase_matching():
        medium = MediumSpec(alpha0=800.0, length=2.5e-3, wavelength=793e-9, theta=17.5e-3)
        matched = max_phase_matched_order(medium)
        ok = abs(matched.theta_c - 12.6e-3) < 0.1e-3 and matched.regime == "large-angle"
        return ok, "phase matching: theta_c = 12.6 mrad, 17.5 mrad is large angle"

    def determinism():
        a = bench.reproduce_figure("3", grid=grid).sha256()
        b = bench.reproduce_figure("3", grid=grid).sha256()
        return a == b, "dataset determinism (bit-identical rebuild)"

    return [
        closed_forms,
        probe_vs_closed,
        symmetry,
        conservation,
        oracle_equivalence,
        passivity,
        entrance_contrasts,
        phase_matching,
        determinism,
    ]


def _cmd_validate(args, config) -> int:
    failures = 0
    for check in _validation_checks():
        try:
            ok, label = check()
        except Exception as exc:  # surface, keep running the rest
            ok, label = False, f"{check.__name__} raised {exc!r}"
        print(("PASS " if ok else "FAIL ") + label)
        failures += 0 if ok else 1
    if failures and not args.quiet:
        print(f"{failures} check(s) failed")
    return 1 if failures else 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--quiet", action="store_true", help="suppress status messages")
    parser.add_argument("--out", help="output path, or - for standard output")
    parser.add_argument("--out-dir", dest="out_dir", help="output directory")
    parser.add_argument("--nphi", type=int, help="phase grid size (default 256)")
    parser.add_argument("--nz", type=int, help="depth steps (default 400)")


def _add_physics(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", help="scheme preset: " + ", ".join(PRESETS))
    parser.add_argument("--xr", type=float, help="sublevel drive xi<r>")
    parser.add_argument("--zr", type=float, help="standard drive zeta<r>")
    parser.add_argument("--r-avg", dest="r_avg", type=float, help="average reduced rate")
    parser.add_argument(
        "--saturated",
        action="store_true",
        default=None,
        help="strong-drive limit of the sublevel schemes",
    )
    parser.add_argument("--od", type=float, help="initial optical depth alpha0 L")
    parser.add_argument("--regime", help="small | large | collinear")
    parser.add_argument("--theta", type=float, help="beam angle, rad")
    parser.add_argument("--wavelength", type=float, help="wavelength, m")
    parser.add_argument("--length", type=float, help="medium length, m")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isgsim",
        description="Engrave spectro-spatial absorption gratings and probe "
        "their diffraction efficiency.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_engrave = sub.add_parser("engrave", help="depth-resolved grating profile CSV")
    _add_common(p_engrave)
    _add_physics(p_engrave)
    p_engrave.set_defaults(func=_cmd_engrave)

    p_probe = sub.add_parser("probe", help="probe an engraved or ideal grating (JSON)")
    _add_common(p_probe)
    _add_physics(p_probe)
    p_probe.add_argument(
        "--ideal", choices=("sinusoidal", "square"), help="probe an ideal grating"
    )
    p_probe.set_defaults(func=_cmd_probe)

    p_sweep = sub.add_parser("sweep", help="efficiency curve CSV")
    _add_common(p_sweep)
    _add_physics(p_sweep)
    p_sweep.add_argument("--mode", choices=("od", "drive"), help="swept parameter")
    p_sweep.add_argument("--start", type=float)
    p_sweep.add_argument("--stop", type=float)
    p_sweep.add_argument("--step", type=float, help="od step (od mode)")
    p_sweep.add_argument("--points", type=int, help="points (drive mode)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_figure = sub.add_parser("figure", help="reference figure datasets + manifest")
    _add_common(p_figure)
    p_figure.add_argument("id", choices=bench.FIGURE_IDS + ("all",))
    p_figure.set_defaults(func=_cmd_figure)

    p_oracle = sub.add_parser("oracle", help="transient-vs-closed-form report")
    _add_common(p_oracle)
    p_oracle.add_argument("--points", type=int, help="random points per scheme")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_validate = sub.add_parser("validate", help="run the invariant suite")
    _add_common(p_validate)
    p_validate.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # downstream consumer closed the pipe (e.g. head); not an error
        try:
            sys.stdout.close()
        except OSError:
            pass
        return 0


if __name__ == "__main__":
    sys.exit(main())
