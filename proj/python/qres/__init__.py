"""Resonances and effective Hamiltonians of atom-field models."""

from ._core import (
    ModelError,
    QresError,
    RegimeError,
    ResonanceCondition,
    classical_max_transition,
    collective_generator,
    diamond_exact_conjugation,
    diamond_first_order,
    dicke_dispersive,
    dicke_index,
    dicke_nonrwa,
    dicke_rwa,
    eigvalsh,
    enumerate_resonances,
    interaction_operator,
    nonrwa_series,
    theta,
    tune_classical_resonance,
)

__all__ = [
    "ModelError",
    "QresError",
    "RegimeError",
    "ResonanceCondition",
    "classical_max_transition",
    "collective_generator",
    "diamond_exact_conjugation",
    "diamond_first_order",
    "dicke_dispersive",
    "dicke_index",
    "dicke_nonrwa",
    "dicke_rwa",
    "eigvalsh",
    "enumerate_resonances",
    "interaction_operator",
    "nonrwa_series",
    "theta",
    "tune_classical_resonance",
]
