"""Monogamy and polygamy bound families built on pairwise measure values.

Three regimes, all over a descending list E_1 >= ... >= E_n > 0 of pairwise
values and a base exponent (gamma for monogamy, delta for polygamy):

* monogamy lower bounds on E^alpha of the joint cut, 0 <= alpha <= gamma;
* polygamy upper bounds on E_a^beta, beta >= delta;
* polygamy upper bounds on E_a^omega, 0 <= omega <= delta.

Each regime comes with three weaker competitor levels. The partition
sandwich combines two omega-regime bounds into lower/upper estimates of
C^omega on the A B1 | B2 ... cut of an N >= 4 qubit pure state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .kernels import DomainError, SRange
from .linalg import InputError, PartitionSpec, StateVector
from .measures import pairwise_profile, pure_concurrence

ZERO_THRESHOLD = 1e-12
S_ENDPOINT_OFFSET = 1e-9


@dataclass(frozen=True)
class OrderedMeasures:
    """Positive measure values sorted descending, with derived s-range and tau ratios."""

    values: tuple[float, ...]
    base_exponent: float
    dropped: int = 0
    s_admissible: SRange = field(init=False)
    tau: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if self.base_exponent <= 0:
            raise InputError(f"base exponent must be positive, got {self.base_exponent}")
        if any(v <= 0 for v in vals):
            raise InputError("values must be strictly positive; use OrderedMeasures.from_values")
        if any(b > a for a, b in zip(vals, vals[1:])):
            raise InputError("values must be nonincreasing")
        object.__setattr__(self, "values", vals)
        if vals:
            p = self.powered
            object.__setattr__(self, "s_admissible", kernels.s_range(p))
            object.__setattr__(self, "tau", tuple(float(t) for t in np.atleast_1d(kernels.tau_ratios(p))))
        else:
            object.__setattr__(self, "s_admissible", SRange(1.0))
            object.__setattr__(self, "tau", ())

    @classmethod
    def from_values(cls, values, base_exponent: float) -> OrderedMeasures:
        """Drop entries below 1e-12 and stable-sort the rest descending."""
        kept = [float(v) for v in values if v >= ZERO_THRESHOLD]
        dropped = len(values) - len(kept)
        order = sorted(range(len(kept)), key=lambda i: -kept[i])
        return cls(tuple(kept[i] for i in order), base_exponent, dropped)

    @property
    def powered(self) -> np.ndarray:
        return np.asarray(self.values) ** self.base_exponent

    def __len__(self):
        return len(self.values)


def resolve_s(m: OrderedMeasures, s: float | str | None = None) -> float:
    """Pick the free parameter: ``None`` -> lower end + 1e-9, ``"auto-mid"`` -> midpoint."""
    lo = m.s_admissible.lo
    if s is None:
        return min(lo + S_ENDPOINT_OFFSET, 1.0)
    if s == "auto-mid":
        return (lo + 1.0) / 2
    s = float(s)
    if len(m) >= 2 and not lo * (1 - kernels.RANGE_RTOL) <= s <= 1:
        raise DomainError(f"s = {s} outside the admissible range [{lo:.12g}, 1]")
    return s


def _ratio(exponent, base: float, at_most: bool, name: str):
    # exponents may be arrays; results then broadcast like the kernels
    e = np.asarray(exponent, dtype=float)
    if np.any(e < 0):
        raise DomainError(f"exponent must be nonnegative, got {exponent}")
    if at_most and np.any(e > base):
        raise DomainError(f"{name} = {exponent} exceeds the base exponent {base}")
    if not at_most and np.any(e < base):
        raise DomainError(f"{name} = {exponent} is below the base exponent {base}")
    return e / base


def _empty(x, count: int = 1):
    z = kernels._out(np.zeros(np.shape(x)))
    return z if count == 1 else (z,) * count


def monogamy_lower(m: OrderedMeasures, alpha: float, s: float) -> float:
    """Parametrized lower bound on E^alpha(A | B1 ... B_{N-1}) for alpha <= gamma."""
    x = _ratio(alpha, m.base_exponent, True, "alpha")
    if not len(m):
        return _empty(x)
    return kernels.sum_lower_bound(m.powered, x, s)


def monogamy_competitors(m: OrderedMeasures, alpha: float) -> tuple[float, float, float]:
    x = _ratio(alpha, m.base_exponent, True, "alpha")
    if not len(m):
        return _empty(x, 3)
    return kernels.comparison_levels(m.powered, x)


def polygamy_upper_high(m: OrderedMeasures, beta: float, s: float) -> float:
    """Parametrized upper bound on E_a^beta(A | B1 ... B_{N-1}) for beta >= delta."""
    x = _ratio(beta, m.base_exponent, False, "beta")
    if not len(m):
        return _empty(x)
    return kernels.sum_upper_bound(m.powered, x, s)


def polygamy_competitors_high(m: OrderedMeasures, beta: float) -> tuple[float, float, float]:
    x = _ratio(beta, m.base_exponent, False, "beta")
    if not len(m):
        return _empty(x, 3)
    return kernels.comparison_levels(m.powered, x)


def polygamy_upper_low(m: OrderedMeasures, omega: float) -> float:
    """Tau-corrected upper bound on E_a^omega(A | B1 ... B_{N-1}) for omega <= delta."""
    x = _ratio(omega, m.base_exponent, True, "omega")
    if not len(m):
        return _empty(x)
    return kernels.sum_upper_small_x(m.powered, x)


def polygamy_chain_low(m: OrderedMeasures, omega: float) -> tuple[float, float, float, float]:
    """Four weaker omega-regime upper bounds, tightest first."""
    x = _ratio(omega, m.base_exponent, True, "omega")
    if not len(m):
        return _empty(x, 4)
    return kernels.small_x_levels(m.powered, x)


# -- partition sandwich ------------------------------------------------------


@dataclass(frozen=True)
class PartitionInputs:
    """Pairwise data of an N >= 4 qubit pure state anchored at A (qubit 0) and B1 (qubit 1)."""

    conc_A: tuple[float, ...]
    conc_B1: tuple[float, ...]
    coa_A: OrderedMeasures
    coa_B1: OrderedMeasures
    n_qubits: int

    @property
    def sum_sq_A(self) -> float:
        return float(np.sum(np.square(self.conc_A)))

    @property
    def sum_sq_B1(self) -> float:
        return float(np.sum(np.square(self.conc_B1)))


def partition_inputs(psi: StateVector) -> PartitionInputs:
    if psi.n_qubits < 4:
        raise InputError(f"the partition sandwich needs N >= 4 qubits, state has {psi.n_qubits}")
    conc_A, raw_A = pairwise_profile(psi, 0)
    conc_B1, raw_B1 = pairwise_profile(psi, 1)
    coa_A = OrderedMeasures.from_values(raw_A.values, 2.0)
    coa_B1 = OrderedMeasures.from_values(raw_B1.values, 2.0)
    for name, om in (("A", coa_A), ("B1", coa_B1)):
        if om.dropped:
            warnings.warn(f"dropped {om.dropped} vanishing CoA value(s) anchored at {name}", stacklevel=2)
    return PartitionInputs(
        conc_A=conc_A.values,
        conc_B1=conc_B1.values,
        coa_A=coa_A,
        coa_B1=coa_B1,
        n_qubits=psi.n_qubits,
    )


@dataclass(frozen=True)
class PartitionBoundReport:
    omega: float
    xi_A: float
    xi_B1: float
    lower: float
    upper: float
    families: dict[str, float]

    def __post_init__(self):
        if self.lower < 0 or self.lower > self.upper:
            raise InputError(f"inconsistent sandwich: lower={self.lower}, upper={self.upper}")


def _lower_from(inputs: PartitionInputs, omega: float, up_A: float, up_B1: float) -> float:
    def root(v):
        return v ** (omega / 2) if v > 0 else 0.0

    return max(root(inputs.sum_sq_A) - up_B1, root(inputs.sum_sq_B1) - up_A)


def sandwich_from_inputs(inputs: PartitionInputs, omega: float) -> PartitionBoundReport:
    if not 0 <= omega <= 2:
        raise DomainError(f"omega must lie in [0, 2], got {omega}")
    xi_A = polygamy_upper_low(inputs.coa_A, omega)
    xi_B1 = polygamy_upper_low(inputs.coa_B1, omega)
    z1 = _lower_from(inputs, omega, xi_A, xi_B1)
    fam = {"Z1": z1, "T1": xi_A + xi_B1}
    for name, (z, t) in zip(("2", "3", "4"), _competitor_pairs(inputs, omega)):
        fam["Z" + name], fam["T" + name] = z, t
    ordered = {k: fam[k] for k in ("Z1", "Z2", "Z3", "Z4", "T1", "T2", "T3", "T4")}
    return PartitionBoundReport(omega, xi_A, xi_B1, max(z1, 0.0), xi_A + xi_B1, ordered)


def sandwich_bounds(inputs: PartitionInputs, omega):
    """(lower, upper) of the sandwich only; broadcasts over an array of omegas."""
    w = np.asarray(omega, dtype=float)
    if np.any((w < 0) | (w > 2)):
        raise DomainError(f"omega must lie in [0, 2], got {omega}")
    xi_A = polygamy_upper_low(inputs.coa_A, w)
    xi_B1 = polygamy_upper_low(inputs.coa_B1, w)
    root_A = inputs.sum_sq_A ** (w / 2) if inputs.sum_sq_A > 0 else np.zeros_like(w)
    root_B1 = inputs.sum_sq_B1 ** (w / 2) if inputs.sum_sq_B1 > 0 else np.zeros_like(w)
    lower = np.maximum(np.maximum(root_A - xi_B1, root_B1 - xi_A), 0.0)
    return kernels._out(lower), kernels._out(xi_A + xi_B1)


def _competitor_pairs(inputs: PartitionInputs, omega: float):
    levels_A = polygamy_chain_low(inputs.coa_A, omega)[:3]
    levels_B1 = polygamy_chain_low(inputs.coa_B1, omega)[:3]
    return [(_lower_from(inputs, omega, a, b), a + b) for a, b in zip(levels_A, levels_B1)]


def partition_sandwich(psi: StateVector, omega: float) -> PartitionBoundReport:
    """Lower/upper estimates of C^omega(A B1 | B2 ... B_{N-1}) from pairwise data."""
    return sandwich_from_inputs(partition_inputs(psi), omega)


def sandwich_competitors(psi: StateVector, omega: float) -> tuple[float, float, float, float, float, float]:
    """(Z2, Z3, Z4, T2, T3, T4): the sandwich rebuilt from the weaker omega-regime levels."""
    pairs = _competitor_pairs(partition_inputs(psi), omega)
    zs, ts = zip(*pairs)
    return (*zs, *ts)


def partition_concurrence(psi: StateVector) -> float:
    """C(A B1 | rest), the quantity the sandwich brackets."""
    return pure_concurrence(psi, PartitionSpec((0, 1), psi.n_qubits))


# -- curves ------------------------------------------------------------------


@dataclass
class BoundCurve:
    grid: np.ndarray
    families: dict[str, np.ndarray]

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.families = {k: np.asarray(v, dtype=float) for k, v in self.families.items()}
        for name, series in self.families.items():
            if series.shape != self.grid.shape:
                raise InputError(f"series {name!r} has {series.size} points, grid has {self.grid.size}")


def default_grid(regime: str, n: int = 81) -> np.ndarray:
    lo, hi = {"monogamy": (0.0, 2.0), "polygamy-high": (2.0, 6.0), "polygamy-low": (0.0, 2.0), "sandwich": (0.0, 2.0)}[regime]
    return np.linspace(lo, hi, n)


def monogamy_curve(m: OrderedMeasures, grid, s: float) -> BoundCurve:
    rows = [(monogamy_lower(m, a, s), *monogamy_competitors(m, a)) for a in grid]
    return _curve(grid, rows)


def polygamy_high_curve(m: OrderedMeasures, grid, s: float) -> BoundCurve:
    rows = [(polygamy_upper_high(m, b, s), *polygamy_competitors_high(m, b)) for b in grid]
    return _curve(grid, rows)


def polygamy_low_curve(m: OrderedMeasures, grid) -> BoundCurve:
    rows = [(polygamy_upper_low(m, w), *polygamy_chain_low(m, w)[:3]) for w in grid]
    return _curve(grid, rows)


def sandwich_curve(inputs: PartitionInputs, grid, side: str = "lower") -> BoundCurve:
    letter = {"lower": "Z", "upper": "T"}[side]
    reports = [sandwich_from_inputs(inputs, w) for w in grid]
    rows = [tuple(r.families[f"{letter}{i}"] for i in range(1, 5)) for r in reports]
    return _curve(grid, rows)


def _curve(grid, rows) -> BoundCurve:
    cols = np.array(rows, dtype=float).reshape(len(rows), 4).T
    return BoundCurve(grid, dict(zip(("ours", "level2", "level3", "level4"), cols)))
