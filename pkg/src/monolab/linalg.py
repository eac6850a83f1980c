"""Dense complex linear algebra for small qubit registers.

Qubit 0 is the most significant bit of a computational-basis index, so the
ket |q0 q1 ... q(n-1)> sits at index int("q0q1...", 2). Matrices are plain
``numpy`` arrays; pure states are wrapped in :class:`StateVector` so that the
normalisation invariant is checked once, at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

VALIDATION_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-8
MAX_QUBITS = 6
RENORMALIZE_TOL = 1e-6


class InputError(ValueError):
    """Raised when an operand violates a documented precondition."""


def _n_qubits_for_dim(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise InputError(f"dimension {dim} is not a power of two >= 2")
    if n > MAX_QUBITS:
        raise InputError(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")
    return n


@dataclass(frozen=True)
class StateVector:
    """Normalised pure state on ``n_qubits`` qubits (read-only amplitudes)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        _n_qubits_for_dim(amps.size)
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > VALIDATION_TOL:
            raise InputError(f"state is not normalised: |psi|^2 = {norm2!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InputError("zero vector cannot be normalised")
        return cls(amps / norm)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class PartitionSpec:
    """The qubits ``keep`` retained out of ``total``; the rest are traced out."""

    keep: tuple[int, ...]
    total: int

    def __post_init__(self):
        keep = tuple(int(k) for k in self.keep)
        object.__setattr__(self, "keep", keep)
        if not 1 <= self.total <= MAX_QUBITS:
            raise InputError(f"total must be in 1..{MAX_QUBITS}, got {self.total}")
        if not keep:
            raise InputError("keep must be nonempty")
        if any(b <= a for a, b in zip(keep, keep[1:])):
            raise InputError(f"keep must be strictly increasing, got {keep}")
        if keep[0] < 0 or keep[-1] >= self.total:
            raise InputError(f"keep {keep} out of range for {self.total} qubits")
        if len(keep) == self.total:
            raise InputError("keep must be a proper subset of the register")

    @property
    def complement(self) -> PartitionSpec:
        return PartitionSpec(tuple(q for q in range(self.total) if q not in self.keep), self.total)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; indices of ``a`` are the more significant ones."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*factors: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex) if np.ndim(factors[0]) == 2 else np.ones(1, dtype=complex)
    for f in factors:
        out = tensor_product(out, f)
    return out


def is_hermitian(m: np.ndarray, tol: float = VALIDATION_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T)) <= tol)


def validate_density(rho: np.ndarray, tol: float = VALIDATION_TOL) -> np.ndarray:
    """Return ``rho`` as a complex array, raising :class:`InputError` unless it is a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InputError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho, tol):
        raise InputError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise InputError(f"density matrix has trace {tr!r}, expected 1")
    lowest = np.linalg.eigvalsh(rho)[0]
    if lowest < -tol:
        raise InputError(f"density matrix has negative eigenvalue {lowest!r}")
    return rho


def partial_trace(rho: np.ndarray, spec: PartitionSpec) -> np.ndarray:
    """Reduced density matrix on the qubits in ``spec.keep``."""
    rho = np.asarray(rho, dtype=complex)
    n = spec.total
    dim = 1 << n
    if rho.shape != (dim, dim):
        raise InputError(f"expected a {dim}x{dim} matrix for {n} qubits, got {rho.shape}")
    keep = list(spec.keep)
    gone = list(spec.complement.keep)
    dk, dg = 1 << len(keep), 1 << len(gone)
    perm = keep + gone + [n + q for q in keep] + [n + q for q in gone]
    t = rho.reshape([2] * (2 * n)).transpose(perm).reshape(dk, dg, dk, dg)
    return np.einsum("ijkj->ik", t)


def state_factor(psi: StateVector, keep) -> np.ndarray:
    """Amplitudes as a (kept x traced) matrix M, so that the reduced state is M M^dagger."""
    spec = keep if isinstance(keep, PartitionSpec) else PartitionSpec(tuple(keep), psi.n_qubits)
    if spec.total != psi.n_qubits:
        raise InputError(f"partition is for {spec.total} qubits, state has {psi.n_qubits}")
    order = list(spec.keep) + list(spec.complement.keep)
    return psi.amplitudes.reshape([2] * spec.total).transpose(order).reshape(1 << len(spec.keep), -1)


def reduced_state(psi: StateVector, keep) -> np.ndarray:
    """Reduced density matrix of a pure state, without forming the full projector."""
    m = state_factor(psi, keep)
    return m @ m.conj().T


def hermitian_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise InputError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(m)
    return vals[::-1], vecs[:, ::-1]


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise InputError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(m)[::-1]


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to zero; anything more negative
    is rejected as indefinite.
    """
    vals, vecs = hermitian_eigh(m)
    if vals[-1] < -VALIDATION_TOL:
        raise InputError(f"matrix is indefinite (eigenvalue {vals[-1]!r})")
    root = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * root) @ vecs.conj().T


def psd_factor(m: np.ndarray) -> np.ndarray:
    """W with W W^dagger = m, dropping eigenvalues below the numerical-rank tolerance.

    The tolerance is ``dim * eps * max eigenvalue``, the same cut numpy uses
    for ``matrix_rank``; eigenvalues under it cannot be told apart from
    rounding noise, and keeping them would leak sqrt(eps) into the factor.
    """
    vals, vecs = hermitian_eigh(m)
    if vals[-1] < -VALIDATION_TOL:
        raise InputError(f"matrix is indefinite (eigenvalue {vals[-1]!r})")
    cut = vals.size * np.finfo(float).eps * max(vals[0], 0.0)
    keep = vals > cut
    return vecs[:, keep] * np.sqrt(vals[keep])


def load_state(path: str | Path) -> StateVector:
    """Read a state from the ``n_qubits=<k>`` + ``re im`` line format.

    Amplitudes whose norm is within 1e-6 of one are renormalised;
    larger deviations are rejected.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n_qubits="):
        raise InputError("state file must start with 'n_qubits=<k>'")
    try:
        n = int(lines[0].split("=", 1)[1])
    except ValueError as exc:
        raise InputError(f"bad header {lines[0]!r}") from exc
    if not 1 <= n <= MAX_QUBITS:
        raise InputError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n}")
    body = lines[1:]
    if len(body) != 1 << n:
        raise InputError(f"expected {1 << n} amplitude lines, found {len(body)}")
    parts = []
    for lineno, ln in enumerate(body, start=2):
        fields = ln.split()
        if len(fields) != 2:
            raise InputError(f"line {lineno}: expected 're im', got {ln!r}")
        try:
            parts.append((Decimal(fields[0]), Decimal(fields[1])))
        except InvalidOperation as exc:
            raise InputError(f"line {lineno}: not a decimal number: {ln!r}") from exc
    norm = sum(re * re + im * im for re, im in parts).sqrt()
    if abs(norm - 1) > Decimal(RENORMALIZE_TOL):
        raise InputError(f"amplitudes have norm {norm}, too far from 1 to renormalise")
    amps = np.array([complex(float(re), float(im)) for re, im in parts])
    if abs(norm - 1) <= Decimal(VALIDATION_TOL) / 4:
        # already valid; leave the amplitudes bit-for-bit as written
        return StateVector(amps)
    return StateVector.normalized(amps)


def dump_state(psi: StateVector, path: str | Path) -> None:
    rows = [f"n_qubits={psi.n_qubits}"]
    rows += [f"{float(a.real)!r} {float(a.imag)!r}" for a in psi.amplitudes]
    Path(path).write_text("\n".join(rows) + "\n")
