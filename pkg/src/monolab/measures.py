"""Concurrence, concurrence of assistance and linear entropy."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import InputError, PartitionSpec, StateVector, psd_factor, reduced_state, state_factor, validate_density

UNIT_TOL = 1e-6

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


class MeasureKind(str, enum.Enum):
    CONCURRENCE = "concurrence"
    COA = "coa"


def qubit_label(q: int) -> str:
    """Qubit 0 is the anchor party A; qubit i >= 1 is B_i."""
    return "A" if q == 0 else f"B{q}"


def parse_qubit(label: str | int) -> int:
    if isinstance(label, int):
        return label
    text = label.strip()
    if text.upper() == "A":
        return 0
    if text[:1].upper() == "B" and text[1:].isdigit() and int(text[1:]) >= 1:
        return int(text[1:])
    if text.isdigit():
        return int(text)
    raise InputError(f"unknown qubit label {label!r}; use A, B1, B2, ... or an index")


def _unit_interval(value: float, what: str) -> float:
    if value < -UNIT_TOL or value > 1 + UNIT_TOL:
        raise InputError(f"{what} = {value!r} lies outside [0, 1] beyond tolerance")
    return min(max(value, 0.0), 1.0)


def pure_concurrence(psi: StateVector, spec: PartitionSpec) -> float:
    """sqrt(2 (1 - Tr rho_K^2)) for the kept block K of a pure state."""
    rho = reduced_state(psi, spec)
    purity = float(np.sum(np.abs(rho) ** 2))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def spin_flip_roots(rho: np.ndarray) -> np.ndarray:
    """Descending square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y)."""
    rho = validate_density(rho)
    if rho.shape != (4, 4):
        raise InputError(f"two-qubit density matrix must be 4x4, got {rho.shape}")
    return spin_flip_roots_from_factor(psd_factor(rho))


def spin_flip_roots_from_factor(w: np.ndarray) -> np.ndarray:
    """Spin-flip roots of rho = W W^dagger, as singular values of W^T (Y x Y) W.

    Avoids the square root of a noisy spectrum, so exact zeros stay at
    rounding level even when rho is rank deficient.
    """
    w = np.asarray(w, dtype=complex)
    if w.shape[0] != 4:
        raise InputError(f"factor must have 4 rows, got {w.shape}")
    sv = np.linalg.svd(w.T @ _YY @ w, compute_uv=False)
    return np.pad(sv, (0, max(0, 4 - sv.size)))[:4]


def _concurrence_from_roots(mu: np.ndarray) -> float:
    return _unit_interval(max(0.0, float(mu[0] - mu[1] - mu[2] - mu[3])), "concurrence")


def _coa_from_roots(mu: np.ndarray) -> float:
    return _unit_interval(float(mu.sum()), "concurrence of assistance")


def two_qubit_concurrence(rho: np.ndarray) -> float:
    """max(0, mu1 - mu2 - mu3 - mu4)."""
    return _concurrence_from_roots(spin_flip_roots(rho))


def two_qubit_coa(rho: np.ndarray) -> float:
    """mu1 + mu2 + mu3 + mu4."""
    return _coa_from_roots(spin_flip_roots(rho))


def linear_entropy(rho: np.ndarray) -> float:
    """T(rho) = 1 - Tr(rho^2)."""
    rho = validate_density(rho)
    return float(1.0 - np.sum(np.abs(rho) ** 2))


@dataclass(frozen=True)
class MeasureVector:
    kind: MeasureKind
    anchor: int
    partners: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.partners):
            raise InputError("one value per partner is required")
        if any(v < 0 or v > 1 + 1e-9 for v in self.values):
            raise InputError(f"measure values must lie in [0, 1], got {self.values}")

    def labeled(self) -> dict[str, float]:
        return {qubit_label(q): v for q, v in zip(self.partners, self.values)}


_FROM_ROOTS = {
    MeasureKind.CONCURRENCE: _concurrence_from_roots,
    MeasureKind.COA: _coa_from_roots,
}


def _pair_roots(psi: StateVector, anchor: int):
    n = psi.n_qubits
    if n < 3:
        raise InputError(f"pairwise measures need at least 3 qubits, state has {n}")
    if not 0 <= anchor < n:
        raise InputError(f"anchor {anchor} out of range for {n} qubits")
    partners = tuple(q for q in range(n) if q != anchor)
    roots = [spin_flip_roots_from_factor(state_factor(psi, tuple(sorted((anchor, q))))) for q in partners]
    return partners, roots


def pairwise_measures(psi: StateVector, anchor: int | str, kind: MeasureKind | str) -> MeasureVector:
    """Two-qubit measure between ``anchor`` and every other qubit, partners ascending.

    The pair marginals are never formed explicitly: each is handled through its
    purification factor (see :func:`spin_flip_roots_from_factor`).
    """
    kind = MeasureKind(kind)
    anchor = parse_qubit(anchor)
    partners, roots = _pair_roots(psi, anchor)
    fn = _FROM_ROOTS[kind]
    return MeasureVector(kind, anchor, partners, tuple(fn(mu) for mu in roots))


def pairwise_profile(psi: StateVector, anchor: int | str) -> tuple[MeasureVector, MeasureVector]:
    """(concurrence, CoA) vectors for ``anchor``, sharing one spin-flip spectrum per pair."""
    anchor = parse_qubit(anchor)
    partners, roots = _pair_roots(psi, anchor)
    return (
        MeasureVector(MeasureKind.CONCURRENCE, anchor, partners, tuple(_concurrence_from_roots(mu) for mu in roots)),
        MeasureVector(MeasureKind.COA, anchor, partners, tuple(_coa_from_roots(mu) for mu in roots)),
    )
