"""Coupled Kerr dimer combs: integrator, observables and parameter scans.

`from src.comb import evolve, power_spectrum` works without knowing the
submodule layout.
"""
from .grid import CouplingProfile, RingGrid
from .lle import (
    DimerField,
    EvolutionConfig,
    LLEParams,
    Trajectory,
    evolve,
    homogeneous_steady_states,
    seeded_initial_field,
)
from .disorder import DisorderSpec, apply_disorder
from .spectra import (
    BeatNote,
    CombTooth,
    PinningReport,
    Spectrum,
    Stability,
    beat_note_psd,
    classify_stability,
    comb_teeth,
    pinning_statistics,
    power_spectrum,
    spectral_fidelity,
)
from .scans import (
    EPSurface,
    FidelityCurve,
    RunSetup,
    StabilityCriteria,
    StabilityMap,
    Threshold,
    arnold_tongue_scan,
    bisect_threshold,
    disorder_fidelity_curve,
    pinning_report,
    power_threshold_scan,
)

__all__ = [
    "CouplingProfile", "RingGrid", "DimerField", "EvolutionConfig", "LLEParams", "Trajectory", "evolve",
    "homogeneous_steady_states", "seeded_initial_field", "DisorderSpec", "apply_disorder", "BeatNote",
    "CombTooth", "PinningReport", "Spectrum", "Stability", "beat_note_psd", "classify_stability",
    "comb_teeth", "pinning_statistics", "power_spectrum", "spectral_fidelity", "EPSurface",
    "FidelityCurve", "RunSetup", "StabilityCriteria", "StabilityMap", "Threshold", "arnold_tongue_scan",
    "bisect_threshold", "disorder_fidelity_curve", "pinning_report", "power_threshold_scan",
]
