"""Seeded sampling checks for the scalar inequalities and the physical premises.

Trials are split into fixed-size blocks, each driven by its own child of
``numpy.random.SeedSequence(seed)``. Blocks may run on several threads
(``MONOLAB_THREADS`` caps the count) but the block layout, and hence every
reported number, depends only on ``trials`` and ``seed``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bounds, kernels
from .linalg import PartitionSpec
from .measures import pairwise_profile, pure_concurrence
from .states import haar_state

LEMMAS = ("2.1", "2.2", "3.1", "3.2", "4.1", "4.2")
RELATIVE_TOL = 1e-12
STATE_TOL = 1e-8
LEMMA_BLOCK = 50_000
STATE_BLOCK = 500
MAX_SEQUENCE = 8


@dataclass
class SuiteResult:
    name: str
    trials: int
    worst_slack: float
    worst_case: dict = field(default_factory=dict)
    tolerance: float = RELATIVE_TOL
    relative: bool = True

    @property
    def passed(self) -> bool:
        return self.worst_slack >= -self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "worst_slack": self.worst_slack,
            "tolerance": self.tolerance,
            "relative": self.relative,
            "worst_case": self.worst_case,
        }

    def line(self) -> str:
        import json

        status = "PASS" if self.passed else "FAIL"
        kind = "rel" if self.relative else "abs"
        return (
            f"{status} {self.name} trials={self.trials} worst_slack={self.worst_slack:+.3e} "
            f"({kind} tol {self.tolerance:.0e}) worst={json.dumps(self.worst_case, sort_keys=True)}"
        )


def thread_count() -> int:
    raw = os.environ.get("MONOLAB_THREADS")
    if raw:
        return max(1, int(raw))
    return max(1, min(8, os.cpu_count() or 1))


def _blocks(total: int, size: int) -> list[int]:
    full, rest = divmod(total, size)
    return [size] * full + ([rest] if rest else [])


def _sharded(fn: Callable, total: int, size: int, seed: int) -> list:
    sizes = _blocks(total, size)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    rngs = [np.random.Generator(np.random.PCG64(c)) for c in children]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(fn, sizes, rngs))


def _chain_slack(values, descending: bool) -> np.ndarray:
    """Smallest relative gap along a chain that should be monotone."""
    worst = None
    for hi, lo in zip(values, values[1:]):
        hi, lo = np.asarray(hi, dtype=float), np.asarray(lo, dtype=float)
        gap = hi - lo if descending else lo - hi
        scale = np.maximum(np.abs(hi), np.abs(lo))
        rel = np.where(scale > 0, gap / np.where(scale > 0, scale, 1.0), gap)
        worst = rel if worst is None else np.minimum(worst, rel)
    return worst


def _merge(parts) -> tuple[float, dict]:
    """Pick the worst (slack, case) over blocks; ties go to the earliest block."""
    best = (math.inf, {})
    for slack, case in parts:
        if slack < best[0]:
            best = (slack, case)
    return best


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


# -- scalar lemma samplers ---------------------------------------------------


def _two_point_block(kind: str):
    def run(size, rng):
        a = _log_uniform(rng, 1.0, 20.0, size)
        t = a * _log_uniform(rng, 1.0, 1e4, size)
        if kind == "4.1":
            x = rng.uniform(0.0, 1.0, size)
            chain = [(1 + t) ** x, *kernels.m_refined_chain(t, x, a)]
            slack = _chain_slack(chain, descending=False)
            i = int(np.argmin(slack))
            return float(slack[i]), {"t": float(t[i]), "x": float(x[i]), "m": float(a[i])}
        x = rng.uniform(0.0, 1.0, size) if kind == "2.1" else rng.uniform(1.0, 6.0, size)
        s = rng.uniform(a / t, 1.0)
        fn = kernels.chain_monogamy if kind == "2.1" else kernels.chain_polygamy
        chain = [(1 + t) ** x, *fn(t, x, a, s)]
        slack = _chain_slack(chain, descending=kind == "2.1")
        i = int(np.argmin(slack))
        return float(slack[i]), {"t": float(t[i]), "x": float(x[i]), "a": float(a[i]), "s": float(s[i])}

    return run


def _sequences(rng, rows: int, n: int) -> np.ndarray:
    p = _log_uniform(rng, 1e-6, 1.0, (rows, n))
    tied = rng.random(rows) < 0.1
    p[tied] = np.ceil(p[tied] * 4) / 4
    return -np.sort(-p, axis=-1)


def _sequence_block(kind: str):
    def run(size, rng):
        parts = []
        for n, rows in zip(range(1, MAX_SEQUENCE + 1), np.array_split(np.arange(size), MAX_SEQUENCE)):
            rows = rows.size
            if not rows:
                continue
            p = _sequences(rng, rows, n)
            total = p.sum(axis=-1)
            if kind == "4.2":
                x = rng.uniform(0.0, 1.0, rows)
                chain = [total**x, kernels.sum_upper_small_x(p, x), *kernels.small_x_levels(p, x)]
                s = np.full(rows, np.nan)
                descending = False
            else:
                x = rng.uniform(0.0, 1.0, rows) if kind == "2.2" else rng.uniform(1.0, 5.0, rows)
                s = rng.uniform(np.broadcast_to(kernels.admissible_lo(p), (rows,)), 1.0)
                if kind == "2.2":
                    chain = [total**x, kernels.sum_lower_bound(p, x, s), *kernels.comparison_levels(p, x)]
                    descending = True
                else:
                    chain = [total**x, kernels.sum_upper_bound(p, x, s), *kernels.comparison_levels(p, x)]
                    descending = False
            slack = _chain_slack(chain, descending)
            i = int(np.argmin(slack))
            case = {"p": p[i].tolist(), "x": float(x[i])}
            if not np.isnan(s[i]):
                case["s"] = float(s[i])
            parts.append((float(slack[i]), case))
        return _merge(parts)

    return run


_LEMMA_RUNNERS = {
    "2.1": _two_point_block("2.1"),
    "2.2": _sequence_block("2.2"),
    "3.1": _two_point_block("3.1"),
    "3.2": _sequence_block("3.2"),
    "4.1": _two_point_block("4.1"),
    "4.2": _sequence_block("4.2"),
}


def verify_lemma(lemma: str, trials: int, seed: int) -> SuiteResult:
    """Sample ``trials`` admissible tuples and report the worst relative slack."""
    if lemma not in _LEMMA_RUNNERS:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {', '.join(LEMMAS)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    slack, case = _merge(_sharded(_LEMMA_RUNNERS[lemma], trials, LEMMA_BLOCK, seed))
    return SuiteResult(f"lemma-{lemma}", trials, slack, case)


# -- physical suites on Haar-random states ---------------------------------

ALPHAS = np.linspace(0.0, 2.0, 9)
BETAS = np.linspace(2.0, 6.0, 9)
OMEGAS = np.linspace(0.0, 2.0, 9)

STATE_PROPERTIES = (
    "premise-monogamy",
    "premise-polygamy",
    "coa-dominates-concurrence",
    "bound-monogamy-lower",
    "bound-polygamy-high",
    "bound-polygamy-low",
    "bound-partition-sandwich",
)


def _state_checks(psi) -> dict[str, float]:
    """Absolute slack of every physical property on one state (>= 0 means it holds)."""
    n = psi.n_qubits
    c = pure_concurrence(psi, PartitionSpec((0,), n))
    conc, coa = pairwise_profile(psi, 0)
    out = {
        "premise-monogamy": c**2 - float(np.sum(np.square(conc.values))),
        "premise-polygamy": float(np.sum(np.square(coa.values))) - c**2,
        "coa-dominates-concurrence": min(a - b for a, b in zip(coa.values, conc.values)),
    }
    mono = bounds.OrderedMeasures.from_values(conc.values, 2.0)
    poly = bounds.OrderedMeasures.from_values(coa.values, 2.0)
    worst = math.inf
    for s in {mono.s_admissible.lo, (mono.s_admissible.lo + 1) / 2, 1.0}:
        worst = min(worst, float(np.min(c**ALPHAS - bounds.monogamy_lower(mono, ALPHAS, s))))
    out["bound-monogamy-lower"] = worst
    worst = math.inf
    for s in {poly.s_admissible.lo, (poly.s_admissible.lo + 1) / 2, 1.0}:
        worst = min(worst, float(np.min(bounds.polygamy_upper_high(poly, BETAS, s) - c**BETAS)))
    out["bound-polygamy-high"] = worst
    out["bound-polygamy-low"] = float(np.min(bounds.polygamy_upper_low(poly, OMEGAS) - c**OMEGAS))
    if n >= 4:
        inputs = bounds.partition_inputs(psi)
        cp = bounds.partition_concurrence(psi)
        lower, upper = bounds.sandwich_bounds(inputs, OMEGAS)
        target = cp**OMEGAS
        out["bound-partition-sandwich"] = float(min(np.min(target - lower), np.min(upper - target)))
    return out


def _state_block(n_qubits: int):
    def run(size, rng):
        worst: dict[str, tuple[float, dict]] = {}
        for _ in range(size):
            psi = haar_state(n_qubits, rng)
            for name, slack in _state_checks(psi).items():
                if name not in worst or slack < worst[name][0]:
                    amps = psi.amplitudes
                    worst[name] = (slack, {"n_qubits": n_qubits, "re": amps.real.tolist(), "im": amps.imag.tolist()})
        return worst

    return run


def verify_states(states: int, seed: int, qubit_counts=(3, 4)) -> list[SuiteResult]:
    """Run every physical property on ``states`` Haar-random states per qubit count."""
    if states < 1:
        raise ValueError("states must be >= 1")
    merged: dict[str, list] = {name: [] for name in STATE_PROPERTIES}
    counts = {name: 0 for name in STATE_PROPERTIES}
    for offset, n in enumerate(qubit_counts):
        for part in _sharded(_state_block(n), states, STATE_BLOCK, seed + 1000 * offset):
            for name, entry in part.items():
                merged[name].append(entry)
        for name in STATE_PROPERTIES:
            if name != "bound-partition-sandwich" or n >= 4:
                counts[name] += states
    results = []
    for name in STATE_PROPERTIES:
        if not merged[name]:
            continue
        slack, case = _merge(merged[name])
        results.append(SuiteResult(name, counts[name], slack, case, tolerance=STATE_TOL, relative=False))
    return results


def verify_all(trials: int, seed: int, states: int | None = None) -> list[SuiteResult]:
    """Every lemma suite with ``trials`` tuples, then the state suites."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    results = [verify_lemma(lemma, trials, seed) for lemma in LEMMAS]
    results += verify_states(states if states is not None else min(trials, 10_000), seed)
    return results
