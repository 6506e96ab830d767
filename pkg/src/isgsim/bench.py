"""Machine-readable datasets behind the reference figures.

Each dataset is a plain numeric table with named columns plus provenance
metadata and, where applicable, annotated reference points (headline
values and measured constants) that downstream renderers overlay.  A JSON
manifest lists the written datasets with sha256 checksums.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diffraction import efficiency_vs_depth, engrave_and_probe, eta_uniform
from .engraving import (
    GratingProfile,
    MediumSpec,
    contrast,
    engrave_small_angle,
    engraving_field,
    entrance_profile,
)
from .excitation import PhaseGrid, PulsePairSpec, replica_alignment_scan
from .kinetics import tm_yag_isg, tm_yag_lambda, tm_yag_standard, xi, zeta

FIGURE_IDS = ("2", "3", "5", "6", "7", "9-calc")

#: measured reference constants (hardware effects are not simulated)
MEASURED_SMALL_ANGLE_EFFICIENCY = 0.11
MEASURED_LARGE_ANGLE_EFFICIENCY = 0.063
MEASURED_AVERAGE_CONTRAST = 1.60

#: power sweep of the efficiency measurement, in xi<r> units
EXPERIMENT_DRIVE_SWEEP = (0.005, 0.1, 1.0, 3.0, 11.3)
EXPERIMENT_OD = 2.0

OD_SWEEP_STEP = 0.05
OD_SWEEP_MAX = 3.0


@dataclass(frozen=True)
class FigureDataset:
    """One numeric table, its provenance and overlay annotations."""

    figure_id: str
    columns: tuple
    table: np.ndarray  # (rows, len(columns))
    metadata: dict = field(default_factory=dict)
    reference_points: tuple = ()  # dicts: {"x", "y", "label"}

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 2 or table.shape[1] != len(self.columns):
            raise ValueError("table must have one column per name")
        if not np.all(np.isfinite(table)):
            raise ValueError("dataset rows must be finite")
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "reference_points", tuple(self.reference_points))

    def to_csv(self, stream) -> None:
        stream.write(",".join(self.columns) + "\n")
        for row in self.table:
            stream.write(",".join(repr(float(v)) for v in row) + "\n")

    def csv_bytes(self) -> bytes:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue().encode()

    def sha256(self) -> str:
        return hashlib.sha256(self.csv_bytes()).hexdigest()


def depth_averaged_absorption(profile: GratingProfile) -> np.ndarray:
    """Mean absorption over the crystal depth, (1/L) integral of
    alpha(z, phi) dz per phase bin (trapezoidal); what a weak transmission
    probe measures as -(1/L) ln T(phi)."""
    return np.trapezoid(profile.alpha, profile.z, axis=0) / profile.length


def _od_sweep() -> np.ndarray:
    n = int(round(OD_SWEEP_MAX / OD_SWEEP_STEP))
    return np.round(OD_SWEEP_STEP * np.arange(1, n + 1), 10)


def _entrance_family(scheme, drives, grid: PhaseGrid):
    cols = [grid.phi]
    for drive in drives:
        pump = engraving_field(grid, scheme, drive)
        cols.append(entrance_profile(scheme, pump))
    return np.column_stack(cols)


def _figure_2(grid: PhaseGrid) -> FigureDataset:
    drives = (0.1, 0.3, 0.6, 0.9)
    scheme = tm_yag_standard()
    table = _entrance_family(scheme, drives, grid)
    return FigureDataset(
        figure_id="2",
        columns=("phi",) + tuple(f"zr={d:g}" for d in drives),
        table=table,
        metadata={
            "scheme": "standard3",
            "quantity": "alpha/alpha0 at z=0",
            "drives_zeta_r": list(drives),
            "n_phi": grid.n_phi,
        },
        reference_points=(
            {"x": float(np.pi), "y": 1.0, "label": "unpumped level"},
        ),
    )


def _figure_3(grid: PhaseGrid) -> FigureDataset:
    drives = (0.5, 2.0, 6.0, 30.0)
    scheme = tm_yag_isg()
    table = _entrance_family(scheme, drives, grid)
    return FigureDataset(
        figure_id="3",
        columns=("phi",) + tuple(f"xr={d:g}" for d in drives),
        table=table,
        metadata={
            "scheme": "tm5",
            "quantity": "alpha/alpha0 at z=0",
            "drives_xi_r": list(drives),
            "n_phi": grid.n_phi,
        },
        reference_points=(
            {"x": float(np.pi), "y": 1.967, "label": "max contrast 1.97 peak"},
        ),
    )


def _figure_5() -> FigureDataset:
    scheme = tm_yag_lambda()
    delay = 1e-6
    spec = PulsePairSpec(
        envelope="gaussian",
        pulse_area=0.01,
        pulse_duration=0.078 * delay,
        delay=delay,
        period=120e-6,
    )
    ratios = (0.5, 1.0, 1.5, 2.0)
    # moderate drive: xi * (phi-averaged reduced rate at band center) = 1
    center_rate = float(spec.areas[0] ** 2 / (2.0 * spec.period))
    r_scale = 1.0 / (xi(scheme) * center_rate)
    curves = replica_alignment_scan(scheme, spec, ratios, r_scale)
    nu = curves[0].nu
    table = np.column_stack([nu / spec.fringe_spacing] + [c.alpha_over_alpha0 for c in curves])
    return FigureDataset(
        figure_id="5",
        columns=("nu_over_delta",) + tuple(f"ratio={r:g}" for r in ratios),
        table=table,
        metadata={
            "scheme": "lambda3",
            "quantity": "alpha/alpha0 vs frequency",
            "delay_s": delay,
            "fringe_spacing_hz": spec.fringe_spacing,
            "splitting_ratios": list(ratios),
            "drive_xi_r_center": 1.0,
        },
    )


def _figure_6(grid: PhaseGrid, scheme_filter: str | None = None) -> FigureDataset:
    slices = (0.0, 0.5, 1.0, 1.5, 2.0)
    n_z = 400
    cols = [grid.phi]
    names = ["phi"]
    cases = []
    if scheme_filter in (None, "standard"):
        cases.append(("std", tm_yag_standard(), 0.9))
    if scheme_filter in (None, "isg"):
        cases.append(("isg", tm_yag_isg(), 30.0))
    if not cases:
        raise ValueError(f"unknown scheme filter {scheme_filter!r}")
    for tag, scheme, drive in cases:
        pump = engraving_field(grid, scheme, drive)
        medium = MediumSpec(alpha0=1.0, optical_depth=2.0)
        profile = engrave_small_angle(scheme, pump, medium, n_z=n_z)
        for od in slices:
            idx = int(round(od / 2.0 * n_z))
            cols.append(profile.alpha[idx])
            names.append(f"{tag}_od{od:g}")
    return FigureDataset(
        figure_id="6",
        columns=tuple(names),
        table=np.column_stack(cols),
        metadata={
            "quantity": "alpha/alpha0 vs phi at depth slices",
            "depth_slices_od": list(slices),
            "drives": {"std": 0.9, "isg": 30.0},
            "regime": "small-angle",
            "n_phi": grid.n_phi,
            "n_z": n_z,
        },
        reference_points=(
            {"x": float(np.pi), "y": 1.97, "label": "ISG entrance contrast peak"},
        ),
    )


def _figure_7(grid: PhaseGrid) -> FigureDataset:
    ods = _od_sweep()
    std = tm_yag_standard()
    isg = tm_yag_isg()
    r_std = 0.9 / zeta(std)
    std_small = efficiency_vs_depth(std, r_std, "small-angle", ods, grid)
    std_large = efficiency_vs_depth(std, r_std, "large-angle", ods, grid)
    # saturated limit: the drive magnitude is ignored, 1.0 fixes the shape
    isg_small = efficiency_vs_depth(isg, 1.0, "small-angle", ods, grid, saturated=True)
    isg_large = efficiency_vs_depth(isg, 1.0, "large-angle", ods, grid, saturated=True)
    eta_sin = np.array([eta_uniform(1.0, 0.5, od) for od in ods])
    eta_sq = np.array([eta_uniform(1.0, 2.0 / np.pi, od) for od in ods])
    table = np.column_stack(
        [ods, std_small.eta, std_large.eta, isg_small.eta, isg_large.eta, eta_sin, eta_sq]
    )
    return FigureDataset(
        figure_id="7",
        columns=(
            "od",
            "eta_standard_small",
            "eta_standard_large",
            "eta_isg_small",
            "eta_isg_large",
            "eta_uniform_sin",
            "eta_uniform_square",
        ),
        table=table,
        metadata={
            "quantity": "first-order diffraction efficiency vs initial optical depth",
            "standard_drive_zeta_r": 0.9,
            "isg_drive": "saturated limit (contrast 2 at the entrance)",
            "od_step": OD_SWEEP_STEP,
            "n_phi": grid.n_phi,
        },
        reference_points=(
            {"x": 2.0, "y": 0.183, "label": "ISG small-angle headline"},
            {"x": 1.8, "y": 0.116, "label": "ISG large-angle maximum"},
            {"x": 2.0, "y": 0.135, "label": "uniform sinusoidal grating"},
            {"x": 2.0, "y": 0.219, "label": "uniform square grating"},
        ),
    )


def _figure_9_calc(grid: PhaseGrid, drive: float = 6.0) -> FigureDataset:
    scheme = tm_yag_isg()
    pump = engraving_field(grid, scheme, drive)
    medium = MediumSpec(alpha0=1.0, optical_depth=2.0)
    profile = engrave_small_angle(scheme, pump, medium)
    avg = depth_averaged_absorption(profile)
    c = contrast(avg, profile.alpha0)
    return FigureDataset(
        figure_id="9-calc",
        columns=("phi", "alpha_avg"),
        table=np.column_stack([grid.phi, avg]),
        metadata={
            "scheme": "tm5",
            "quantity": "depth-averaged alpha/alpha0 vs phi",
            "drive_xi_r": drive,
            "od": 2.0,
            "regime": "collinear (small-angle)",
            "contrast_calc": c,
        },
        reference_points=(
            {"x": float(np.pi), "y": 1.0 + c / 2.0, "label": f"calculated contrast {c:.2f}"},
            {
                "x": float(np.pi),
                "y": 1.0 + MEASURED_AVERAGE_CONTRAST / 2.0,
                "label": "measured contrast 1.60",
            },
        ),
    )


def reproduce_figure(figure_id, grid: PhaseGrid | None = None, **overrides) -> FigureDataset:
    """Build the dataset behind one reference figure.

    ``overrides``: figure 6 accepts ``scheme`` in {"standard", "isg"};
    figure 9-calc accepts ``drive`` (xi<r> of the collinear engraving).
    """
    fid = str(figure_id)
    grid = grid or PhaseGrid()
    if fid == "2":
        return _figure_2(grid)
    if fid == "3":
        return _figure_3(grid)
    if fid == "5":
        return _figure_5()
    if fid == "6":
        return _figure_6(grid, overrides.get("scheme"))
    if fid == "7":
        return _figure_7(grid)
    if fid == "9-calc":
        return _figure_9_calc(grid, overrides.get("drive", 6.0))
    raise ValueError(f"unknown figure id {figure_id!r} (known: {', '.join(FIGURE_IDS)})")


@dataclass(frozen=True)
class ExperimentRow:
    """One measured-vs-simulated comparison row."""

    quantity: str
    measured: float
    simulated: float
    conditions: str


def experiment_reference(grid: PhaseGrid | None = None) -> list[ExperimentRow]:
    """Measured reference values next to the simulator's predictions.

    The measured numbers are constants (hardware effects are outside the
    model); the simulated ones are computed live at the measurement
    operating point: od 2, drive swept over xi<r> in [0.005, 11.3].
    """
    grid = grid or PhaseGrid()
    scheme = tm_yag_isg()
    x = xi(scheme)
    medium = MediumSpec(alpha0=1.0, optical_depth=EXPERIMENT_OD)
    best = {"small-angle": 0.0, "large-angle": 0.0}
    for regime in best:
        for drive in EXPERIMENT_DRIVE_SWEEP:
            eta = engrave_and_probe(scheme, drive / x, medium, regime, grid).eta
            best[regime] = max(best[regime], eta)
    pump = engraving_field(grid, scheme, 6.0)
    profile = engrave_small_angle(scheme, pump, medium)
    c_calc = contrast(depth_averaged_absorption(profile), profile.alpha0)
    sweep = f"od {EXPERIMENT_OD:g}, xi<r> swept to {max(EXPERIMENT_DRIVE_SWEEP):g}"
    return [
        ExperimentRow(
            quantity="max small-angle efficiency",
            measured=MEASURED_SMALL_ANGLE_EFFICIENCY,
            simulated=best["small-angle"],
            conditions=sweep,
        ),
        ExperimentRow(
            quantity="max large-angle efficiency",
            measured=MEASURED_LARGE_ANGLE_EFFICIENCY,
            simulated=best["large-angle"],
            conditions=sweep,
        ),
        ExperimentRow(
            quantity="depth-averaged contrast",
            measured=MEASURED_AVERAGE_CONTRAST,
            simulated=c_calc,
            conditions=f"collinear, xi<r> = 6, od {EXPERIMENT_OD:g}",
        ),
    ]


def write_datasets(figure_ids, out_dir, grid: PhaseGrid | None = None) -> Path:
    """Write figure CSVs plus a manifest.json with sha256 checksums;
    returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for fid in figure_ids:
        ds = reproduce_figure(fid, grid=grid)
        name = f"figure{ds.figure_id}.csv".replace("-", "_")
        path = out / name
        path.write_bytes(ds.csv_bytes())
        entries.append(
            {
                "figure": ds.figure_id,
                "file": name,
                "sha256": ds.sha256(),
                "columns": list(ds.columns),
                "metadata": ds.metadata,
                "reference_points": list(ds.reference_points),
            }
        )
    manifest = {
        "generator": "isgsim",
        "datasets": entries,
        "experiment_reference": [
            {
                "quantity": row.quantity,
                "measured": row.measured,
                "simulated": row.simulated,
                "conditions": row.conditions,
            }
            for row in experiment_reference(grid)
        ],
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest_path
