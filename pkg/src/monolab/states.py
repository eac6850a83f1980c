"""Named four-qubit states and seeded Haar-random pure states.

Random sampling uses numpy's PCG64 bit generator (``numpy.random.PCG64``),
so a given seed reproduces the same amplitudes on every platform that ships
the same numpy major version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import InputError, StateVector, VALIDATION_TOL

PRNG_NAME = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def basis_state(bits: str) -> StateVector:
    """Computational basis ket, e.g. ``basis_state("1000")`` for |1000>."""
    if not bits or set(bits) - {"0", "1"}:
        raise InputError(f"not a bit string: {bits!r}")
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(amps)


def bell_state() -> StateVector:
    """(|00> + |11>)/sqrt(2)."""
    return StateVector(np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))


@dataclass(frozen=True)
class WClassParams:
    lambdas: tuple[float, float, float, float]

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        if len(lam) != 4:
            raise InputError(f"W-class states take four amplitudes, got {len(lam)}")
        if min(lam) < 0:
            raise InputError(f"amplitudes must be nonnegative, got {lam}")
        total = math.fsum(v * v for v in lam)
        if abs(total - 1.0) > VALIDATION_TOL:
            raise InputError(f"sum of squared amplitudes is {total!r}, expected 1")
        object.__setattr__(self, "lambdas", lam)


EXAMPLE_W_PARAMS = WClassParams((0.75, 0.5, math.sqrt(2) / 4, 0.25))


def w_class_state(p: WClassParams) -> StateVector:
    """l1|1000> + l2|0100> + l3|0010> + l4|0001> on qubits (A, B1, B2, B3)."""
    amps = np.zeros(16, dtype=complex)
    for slot, lam in enumerate(p.lambdas):
        amps[1 << (3 - slot)] = lam
    return StateVector(amps)


def decoherence_free_state() -> StateVector:
    """Equal superposition of the two four-qubit decoherence-free basis states.

    |Phi0> = (|01> - |10>)_{A B1} (|01> - |10>)_{B2 B3} / 2 and
    |Phi1> = (2|1100> + 2|0011> - |1010> - |1001> - |0101> - |0110>) / (2 sqrt 3).
    The two are orthonormal, so the sum needs no renormalisation.
    """
    singlet = np.array([0, 1, -1, 0], dtype=complex)
    phi0 = np.kron(singlet, singlet) / 2
    phi1 = np.zeros(16, dtype=complex)
    for bits, c in (("1100", 2), ("0011", 2), ("1010", -1), ("1001", -1), ("0101", -1), ("0110", -1)):
        phi1[int(bits, 2)] = c
    phi1 /= 2 * math.sqrt(3)
    return StateVector((phi0 + phi1) * (math.sqrt(2) / 2))


def haar_state(n_qubits: int, rng: np.random.Generator) -> StateVector:
    if not 2 <= n_qubits <= 6:
        raise InputError(f"n_qubits must be in 2..6, got {n_qubits}")
    dim = 1 << n_qubits
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(z / np.linalg.norm(z))


def random_pure_state(n_qubits: int, seed: int) -> StateVector:
    """Haar-random pure state; identical output for identical ``seed``."""
    return haar_state(n_qubits, make_rng(seed))
