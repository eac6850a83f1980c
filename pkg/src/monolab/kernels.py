"""Bounds on (1+t)^x and on (p_1 + ... + p_N)^x.

Every function broadcasts over leading array axes: scalars go in and floats
come out, arrays go in and arrays come out. Sequence arguments ``p`` carry
the sequence on the last axis and must be positive and nonincreasing there.

Power convention: the increment k^x - (k-1)^x is 1 at k = 1 for every
x >= 0, including x = 0 (right-continuity of 0^x). Elsewhere numpy's
0.0 ** 0 == 1 applies.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .linalg import InputError

# admissible-range comparisons tolerate this much relative rounding
RANGE_RTOL = 1e-12


class DomainError(InputError):
    """A kernel argument lies outside the domain where its inequality holds."""


class SRange(NamedTuple):
    lo: float
    hi: float = 1.0


def _require(ok, constraint: str) -> None:
    if not np.all(ok):
        raise DomainError(f"parameter domain violated: {constraint}")


def _out(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


def _as_sequence(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim == 0:
        p = p[None]
    if p.shape[-1] == 0:
        raise DomainError("sequence must be nonempty")
    _require(p > 0, "p_i > 0")
    _require(p[..., :-1] >= p[..., 1:], "p_i >= p_(i+1) (nonincreasing)")
    return p


def _chain_levels(t, x, a, s):
    l1 = (1 + a / s) ** (x - 1) + (1 + s / a) ** (x - 1) * t**x
    l2 = (1 + a) ** (x - 1) + (1 + 1 / a) ** (x - 1) * t**x
    l3 = 1 + ((1 + a) ** x - 1) / a**x * t**x
    l4 = 1 + (2**x - 1) * t**x
    return l1, l2, l3, l4


def _chain_args(t, x, a, s, x_ok, x_text):
    t, x, a, s = (np.asarray(v, dtype=float) for v in (t, x, a, s))
    _require(a >= 1, "a >= 1")
    _require(t >= a, "t >= a")
    _require(x_ok(x), x_text)
    _require(s >= (a / t) * (1 - RANGE_RTOL), "s >= a/t")
    _require(s <= 1, "s <= 1")
    return t, x, a, s


def chain_monogamy(t, x, a, s):
    """Four lower bounds on (1+t)^x for 0 <= x <= 1, strongest first.

    (1+t)^x >= L1 >= L2 >= L3 >= L4 whenever t >= a >= 1 and a/t <= s <= 1.
    """
    args = _chain_args(t, x, a, s, lambda v: (v >= 0) & (v <= 1), "0 <= x <= 1")
    return tuple(_out(v) for v in _chain_levels(*args))


def chain_polygamy(t, x, a, s):
    """The same four expressions as upper bounds for x >= 1: (1+t)^x <= L1 <= ... <= L4."""
    args = _chain_args(t, x, a, s, lambda v: v >= 1, "x >= 1")
    return tuple(_out(v) for v in _chain_levels(*args))


def admissible_lo(p) -> np.ndarray | float:
    """max_h h p_(h+1) / (p_1 + ... + p_h) over h = 1..N-1; 1 when N = 1."""
    p = _as_sequence(p)
    n = p.shape[-1]
    if n == 1:
        return _out(np.ones(p.shape[:-1]))
    h = np.arange(1, n)
    ratios = h * p[..., 1:] / np.cumsum(p, axis=-1)[..., :-1]
    return _out(ratios.max(axis=-1))


def s_range(p) -> SRange:
    lo = admissible_lo(p)
    if np.ndim(lo) != 0:
        raise DomainError("s_range takes a single sequence; use admissible_lo for batches")
    return SRange(float(lo))


def _parametrized_sum(p, x, s, x_ok, x_text):
    p = _as_sequence(p)
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    _require(x_ok(x), x_text)
    n = p.shape[-1]
    if n == 1:
        return _out(p[..., 0] ** x)
    lo = admissible_lo(p)
    _require(s >= lo * (1 - RANGE_RTOL), "s >= r (admissible lower end)")
    _require(s <= 1, "s <= 1")
    xm1 = (x - 1)[..., None]
    s_ = s[..., None]
    m = np.arange(1, n, dtype=float)
    # log of (1 + s/m)^(x-1) for m = 1..N-1, summed from m = k upward
    step = xm1 * np.log1p(s_ / m)
    tail = np.concatenate([np.cumsum(step[..., ::-1], axis=-1)[..., ::-1], np.zeros_like(step[..., :1])], axis=-1)
    k = np.arange(1, n + 1, dtype=float)
    head = xm1 * np.log1p((k - 1) / s_)
    coef = np.exp(head + tail)
    return _out(np.sum(coef * p ** x[..., None], axis=-1))


def sum_lower_bound(p, x, s):
    """Parametrized lower bound on (sum p)^x for 0 <= x <= 1 and r <= s <= 1.

    sum_k (1 + (k-1)/s)^(x-1) prod_{m=k}^{N-1} (1 + s/m)^(x-1) p_k^x,
    where the k = N term has an empty product.
    """
    return _parametrized_sum(p, x, s, lambda v: (v >= 0) & (v <= 1), "0 <= x <= 1")


def sum_upper_bound(p, x, s):
    """The same expression as :func:`sum_lower_bound`, an upper bound when x >= 1."""
    return _parametrized_sum(p, x, s, lambda v: v >= 1, "x >= 1")


def comparison_levels(p, x):
    """The three weaker sums obtained by running the induction with L2, L3, L4.

    Returns (level2, level3, level4):
      level2 = sum_{k<N} k^(x-1) prod_{m=k}^{N-1} (1 + 1/m)^(x-1) p_k^x + N^(x-1) p_N^x
      level3 = sum_{k<N} prod_{m=k}^{N-1} ((m+1)^x - 1) / m^x p_k^x + p_N^x
      level4 = sum_k (2^x - 1)^(N-k) p_k^x
    Lower bounds for x <= 1, upper bounds for x >= 1.
    """
    p = _as_sequence(p)
    x = np.asarray(x, dtype=float)
    xe = x[..., None]
    n = p.shape[-1]
    px = p**xe
    m = np.arange(1, n, dtype=float)
    k = np.arange(1, n + 1, dtype=float)

    def suffix_product(factors):
        # prod over m = k..N-1 for k = 1..N (empty product 1 at k = N)
        ones = np.ones(factors.shape[:-1] + (1,))
        return np.concatenate([np.cumprod(factors[..., ::-1], axis=-1)[..., ::-1], ones], axis=-1)

    c2 = k ** (xe - 1) * suffix_product((1 + 1 / m) ** (xe - 1))
    c3 = suffix_product(((m + 1) ** xe - 1) / m**xe)
    c4 = (2**xe - 1) ** (n - k)
    return tuple(_out(np.sum(c * px, axis=-1)) for c in (c2, c3, c4))


def m_refined_upper(t, x, m):
    """t^x + (1+m)^x - m^x + x m^2/(1+m)^2 (t^(x-1) - m^(x-1)), an upper bound on (1+t)^x."""
    return m_refined_chain(t, x, m)[0]


def m_refined_chain(t, x, m):
    """Successively weaker upper bounds on (1+t)^x for t >= m >= 1, 0 <= x <= 1.

    Returns (refined, t^x + (1+m)^x - m^x, t^x + 2^x - 1, t^x + x, t^x + 1).
    """
    t, x, m = (np.asarray(v, dtype=float) for v in (t, x, m))
    _require(m >= 1, "m >= 1")
    _require(t >= m, "t >= m")
    _require((x >= 0) & (x <= 1), "0 <= x <= 1")
    tx = t**x
    plain = tx + (1 + m) ** x - m**x
    refined = plain + x * m**2 / (1 + m) ** 2 * (t ** (x - 1) - m ** (x - 1))
    return tuple(_out(v) for v in (refined, plain, tx + 2**x - 1, tx + x, tx + 1))


def increments(n: int, x) -> np.ndarray:
    """k^x - (k-1)^x for k = 1..n, with the k = 1 entry fixed at 1."""
    x = np.asarray(x, dtype=float)[..., None]
    k = np.arange(1, n + 1, dtype=float)
    w = k**x - (k - 1) ** x
    w[..., 0] = 1.0
    return w


def tau_ratios(p) -> np.ndarray:
    """(p_1 + ... + p_(v-1)) / p_v for v = 2..N (empty for N = 1)."""
    p = _as_sequence(p)
    return np.cumsum(p, axis=-1)[..., :-1] / p[..., 1:]


def sum_upper_small_x(p, x):
    """Upper bound on (sum p)^x for 0 <= x <= 1 with tau-corrections.

    sum_k [k^x - (k-1)^x] p_k^x
      + x sum_{v=2}^N ((v-1)/v)^2 [tau_v^(x-1) - (v-1)^(x-1)] p_v^x
    Each correction is <= 0 because tau_v >= v - 1.
    """
    p = _as_sequence(p)
    x = np.asarray(x, dtype=float)
    _require((x >= 0) & (x <= 1), "0 <= x <= 1")
    n = p.shape[-1]
    xe = x[..., None]
    px = p**xe
    main = np.sum(increments(n, x) * px, axis=-1)
    if n == 1:
        return _out(main)
    v = np.arange(2, n + 1, dtype=float)
    corr = ((v - 1) / v) ** 2 * (tau_ratios(p) ** (xe - 1) - (v - 1) ** (xe - 1)) * px[..., 1:]
    return _out(main + x * np.sum(corr, axis=-1))


def small_x_levels(p, x):
    """The weaker upper bounds that follow the tau-corrected sum, for 0 <= x <= 1.

    Returns (increments only, first + (2^x - 1) rest, first + x rest, plain sum).
    """
    p = _as_sequence(p)
    x = np.asarray(x, dtype=float)
    _require((x >= 0) & (x <= 1), "0 <= x <= 1")
    n = p.shape[-1]
    px = p ** x[..., None]
    first, rest = px[..., 0], np.sum(px[..., 1:], axis=-1)
    inc = np.sum(increments(n, x) * px, axis=-1)
    return tuple(_out(v) for v in (inc, first + (2**x - 1) * rest, first + x * rest, first + rest))
