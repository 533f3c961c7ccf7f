"""UAV swarm phased-array antenna, docking connector and formation simulator."""

from ._core import (
    AmbiguousPeakError,
    InfeasibleError,
    array_factor_directivity_db,
    connector_s12_db,
    dipole,
    gain_vs_count,
    max_operating_frequency,
    misalignment_s12_db,
    reference_timeline_scenario,
    pattern,
    plan_swarm,
    receiver_study,
    reproduce_all,
    run_docking,
    steering_phases,
    validate_formation,
)

__all__ = [
    "AmbiguousPeakError",
    "InfeasibleError",
    "array_factor_directivity_db",
    "connector_s12_db",
    "dipole",
    "gain_vs_count",
    "max_operating_frequency",
    "misalignment_s12_db",
    "reference_timeline_scenario",
    "pattern",
    "plan_swarm",
    "receiver_study",
    "reproduce_all",
    "run_docking",
    "steering_phases",
    "validate_formation",
]
