"""Simulator for spectro-spatial absorption gratings engraved by optical
pumping in optically thick media, and their probe diffraction efficiency."""

from .bench import (
    FigureDataset,
    depth_averaged_absorption,
    experiment_reference,
    reproduce_figure,
    write_datasets,
)
from .diffraction import (
    EfficiencyCurve,
    ProbeResult,
    efficiency_vs_depth,
    efficiency_vs_power,
    engrave_and_probe,
    eta_uniform,
    probe_efficiency,
)
from .engraving import (
    FourierGrating,
    GratingProfile,
    LargeAngleEngraving,
    MediumSpec,
    PhaseMatching,
    contrast,
    engrave_large_angle,
    engrave_small_angle,
    engraving_field,
    entrance_profile,
    fourier_coefficients,
    ideal_grating,
    max_phase_matched_order,
)
from .errors import ConvergenceError, GridResolutionError, SchemeMismatchError
from .excitation import (
    ExcitationField,
    PhaseGrid,
    PulsePairSpec,
    ReplicaScanCurve,
    pulse_pair_spectrum,
    replica_alignment_scan,
    replica_field,
    sinusoidal_pump,
)
from .kinetics import (
    Lambda3,
    LevelScheme,
    MarginReport,
    PopulationState,
    PRESETS,
    Standard3,
    Tm5,
    absorption,
    steady_state,
    tm_yag_isg,
    tm_yag_lambda,
    tm_yag_standard,
    transient_oracle,
    weak_field_margins,
    xi,
    zeta,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "EfficiencyCurve",
    "ExcitationField",
    "FigureDataset",
    "FourierGrating",
    "GratingProfile",
    "GridResolutionError",
    "Lambda3",
    "LargeAngleEngraving",
    "LevelScheme",
    "MarginReport",
    "MediumSpec",
    "PhaseGrid",
    "PhaseMatching",
    "PopulationState",
    "PRESETS",
    "ProbeResult",
    "PulsePairSpec",
    "ReplicaScanCurve",
    "SchemeMismatchError",
    "Standard3",
    "Tm5",
    "absorption",
    "contrast",
    "depth_averaged_absorption",
    "efficiency_vs_depth",
    "efficiency_vs_power",
    "engrave_and_probe",
    "engrave_large_angle",
    "engrave_small_angle",
    "engraving_field",
    "entrance_profile",
    "eta_uniform",
    "experiment_reference",
    "fourier_coefficients",
    "ideal_grating",
    "max_phase_matched_order",
    "probe_efficiency",
    "pulse_pair_spectrum",
    "replica_alignment_scan",
    "replica_field",
    "reproduce_figure",
    "sinusoidal_pump",
    "steady_state",
    "tm_yag_isg",
    "tm_yag_lambda",
    "tm_yag_standard",
    "transient_oracle",
    "weak_field_margins",
    "write_datasets",
    "xi",
    "zeta",
]
