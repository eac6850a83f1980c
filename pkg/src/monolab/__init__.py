"""Entanglement measures on small qubit systems and parametrized monogamy/polygamy bounds."""

from __future__ import annotations

__version__ = "0.1.0"

from .linalg import InputError, PartitionSpec, StateVector, load_state
from .measures import (
    MeasureKind,
    linear_entropy,
    pairwise_measures,
    pure_concurrence,
    two_qubit_coa,
    two_qubit_concurrence,
)
from .states import WClassParams, decoherence_free_state, random_pure_state, w_class_state

__all__ = [
    "InputError",
    "MeasureKind",
    "PartitionSpec",
    "StateVector",
    "WClassParams",
    "decoherence_free_state",
    "linear_entropy",
    "load_state",
    "pairwise_measures",
    "pure_concurrence",
    "random_pure_state",
    "two_qubit_coa",
    "two_qubit_concurrence",
    "w_class_state",
]
