"""Localizable entanglement vs. the bipartite entanglement lost to measurement.

Quantities are negativities (normalized so a Bell pair scores 1) over a
tripartition A1:A2:B of an N-qubit system: the three pre-measurement cut
negativities destroyed by measuring B, and the entanglement localized on
A1:A2 by optimized local projective measurements on B -- for paradigmatic
state families, Haar-random states, phase-flip-noisy states, and spin-chain
ground states.
"""

from .backend import ACTIVE as BACKEND
from .qcore import (
    DensityMatrix,
    PureState,
    Tripartition,
    negativity,
    negativity_trace_norm,
    partial_trace,
    partial_transpose,
    projector_state,
)
from .localize import (
    DELTA1_ZERO_TOL,
    LocalizationResult,
    MeasurementBasis,
    SearchConfig,
    average_entanglement,
    closed_le_dicke,
    closed_le_gghz,
    closed_le_gw,
    closed_le_wclass,
    delta1,
    delta2,
    maximize_le,
    post_measurement,
)
from .noise import NoiseSpec, apply_phase_flip, dephasing_factor, kraus_probs, le_noisy
from .states import (
    DickeParams,
    GDParams,
    GGHZParams,
    GHZClassParams,
    GWParams,
    WClassParams,
    haar_family,
    haar_pure,
    make_dicke,
    make_gd,
    make_gghz,
    make_ghzclass,
    make_gw,
    make_phi3,
    make_phi4,
    make_psi3,
    make_psi4,
    make_wclass,
    spawn_rng,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DELTA1_ZERO_TOL",
    "DensityMatrix",
    "DickeParams",
    "GDParams",
    "GGHZParams",
    "GHZClassParams",
    "GWParams",
    "LocalizationResult",
    "MeasurementBasis",
    "NoiseSpec",
    "PureState",
    "SearchConfig",
    "Tripartition",
    "WClassParams",
    "apply_phase_flip",
    "average_entanglement",
    "closed_le_dicke",
    "closed_le_gghz",
    "closed_le_gw",
    "closed_le_wclass",
    "dephasing_factor",
    "delta1",
    "delta2",
    "haar_family",
    "haar_pure",
    "kraus_probs",
    "le_noisy",
    "make_dicke",
    "make_gd",
    "make_gghz",
    "make_ghzclass",
    "make_gw",
    "make_phi3",
    "make_phi4",
    "make_psi3",
    "make_psi4",
    "make_wclass",
    "maximize_le",
    "negativity",
    "negativity_trace_norm",
    "partial_trace",
    "partial_transpose",
    "post_measurement",
    "projector_state",
    "spawn_rng",
    "__version__",
]
