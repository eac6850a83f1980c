from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from monolab import bounds
from monolab.bounds import OrderedMeasures
from monolab.kernels import DomainError
from monolab.linalg import InputError, PartitionSpec
from monolab.measures import pairwise_measures, pure_concurrence
from monolab.states import EXAMPLE_W_PARAMS, WClassParams, basis_state, make_rng, random_pure_state, w_class_state

EX1 = (0.9107, 0.3333, 0.244)
R2 = math.sqrt(2)
COA_A = (3 / 4, 3 * R2 / 8, 3 / 8)
COA_B1 = (3 / 4, R2 / 4, 1 / 4)


def printed_xi(w, c, tau):
    """Xi for three sorted CoA values as written out term by term in the worked example."""
    h = w / 2
    return (
        c[0] ** w
        + ((2**h - 1) + w / 8 * (tau[0] ** (h - 1) - 1)) * c[1] ** w
        + ((3**h - 2**h) + 2 * w / 9 * (tau[1] ** (h - 1) - 2 ** (h - 1))) * c[2] ** w
    )


@pytest.fixture(scope="module")
def w_inputs():
    return bounds.partition_inputs(w_class_state(EXAMPLE_W_PARAMS))


def test_ordered_measures_sort_and_drop():
    m = OrderedMeasures.from_values([0.2, 0.0, 0.7, 1e-13, 0.2], 2.0)
    assert m.values == (0.7, 0.2, 0.2) and m.dropped == 2
    assert m.tau == pytest.approx((0.49 / 0.04, 0.53 / 0.04))
    with pytest.raises(InputError):
        OrderedMeasures((0.1, 0.2), 2.0)
    with pytest.raises(InputError):
        OrderedMeasures((0.2, 0.0), 2.0)
    with pytest.raises(InputError):
        OrderedMeasures((0.2,), 0.0)


def test_tau_values_of_example(w_inputs):
    assert w_inputs.coa_A.tau == pytest.approx((2.0, 6.0), abs=1e-9)
    assert w_inputs.coa_B1.tau == pytest.approx((4.5, 11.0), abs=1e-9)
    assert w_inputs.coa_A.s_admissible.lo == pytest.approx(0.5, abs=1e-12)


def test_resolve_s():
    m = OrderedMeasures.from_values(COA_A, 2.0)
    assert bounds.resolve_s(m) == pytest.approx(0.5 + 1e-9, abs=1e-15)
    assert bounds.resolve_s(m, "auto-mid") == pytest.approx(0.75)
    assert bounds.resolve_s(m, 0.6) == 0.6
    with pytest.raises(DomainError):
        bounds.resolve_s(m, 0.3)
    with pytest.raises(DomainError):
        bounds.resolve_s(m, 1.2)


def test_monogamy_examples():
    m = OrderedMeasures.from_values(EX1, 2.0)
    assert bounds.monogamy_lower(m, 2.0, 0.6) == pytest.approx(sum(c * c for c in EX1), abs=1e-15)
    assert abs(sum(c * c for c in EX1) - 1.0) <= 2e-4
    printed = 4.3333**-0.5 * 0.244 + 3.4667**-0.5 * 0.3333 + 2.08**-0.5 * 0.9107
    assert bounds.monogamy_lower(m, 1.0, 0.6) == pytest.approx(printed, abs=5e-5)
    assert round(bounds.monogamy_lower(m, 1.0, 0.6), 4) == 0.9277
    x2, x3, x4 = bounds.monogamy_competitors(m, 1.0)
    assert x4 == pytest.approx(0.244 + (R2 - 1) * 0.3333 + (R2 - 1) ** 2 * 0.9107, abs=1e-12)
    assert x2 == pytest.approx(3**-0.5 * sum(EX1), abs=1e-12)
    x3_printed = 0.244 + (3**0.5 - 1) / 2**0.5 * 0.3333 + (3**0.5 - 1) / 2**0.5 * (2**0.5 - 1) * 0.9107
    assert x3 == pytest.approx(x3_printed, abs=1e-12)
    for v in bounds.monogamy_competitors(m, 2.0):
        assert v == pytest.approx(sum(c * c for c in EX1), abs=1e-15)


def test_single_partner_and_empty():
    m = OrderedMeasures.from_values([0.6], 2.0)
    assert bounds.monogamy_lower(m, 1.3, 1.0) == pytest.approx(0.6**1.3, rel=1e-15)
    assert bounds.polygamy_upper_high(m, 3.0, 1.0) == pytest.approx(0.6**3, rel=1e-15)
    empty = OrderedMeasures.from_values([0.0, 0.0], 2.0)
    assert bounds.monogamy_lower(empty, 1.0, 1.0) == 0.0
    assert bounds.polygamy_chain_low(empty, 1.0) == (0.0, 0.0, 0.0, 0.0)


def test_exponent_regime_checks():
    m = OrderedMeasures.from_values(COA_A, 2.0)
    with pytest.raises(DomainError):
        bounds.monogamy_lower(m, 2.5, 0.6)
    with pytest.raises(DomainError):
        bounds.polygamy_upper_high(m, 1.5, 0.6)
    with pytest.raises(DomainError):
        bounds.polygamy_upper_low(m, 2.5)
    with pytest.raises(DomainError):
        bounds.polygamy_upper_low(m, -0.1)
    with pytest.raises(DomainError):
        bounds.monogamy_lower(m, 1.0, 0.4)


def test_polygamy_high_examples():
    m = OrderedMeasures.from_values(COA_A, 2.0)
    assert bounds.polygamy_upper_high(m, 2.0, 3 / 5) == pytest.approx(63 / 64, abs=1e-15)
    y1 = 13 / 3 * (3 / 8) ** 4 + 52 / 15 * (3 * R2 / 8) ** 4 + 52 / 25 * (3 / 4) ** 4
    assert bounds.polygamy_upper_high(m, 4.0, 3 / 5) == pytest.approx(y1, abs=1e-14)
    y4 = (3 / 8) ** 4 + 3 * (3 * R2 / 8) ** 4 + 9 * (3 / 4) ** 4
    assert bounds.polygamy_competitors_high(m, 4.0)[2] == pytest.approx(y4, abs=1e-14)
    for v in bounds.polygamy_competitors_high(m, 2.0):
        assert v == pytest.approx(63 / 64, abs=1e-15)


def test_polygamy_low_examples(w_inputs):
    m = w_inputs.coa_A
    assert bounds.polygamy_upper_low(m, 2.0) == pytest.approx(63 / 64, abs=1e-15)
    assert bounds.polygamy_upper_low(m, 0.0) == 1.0
    assert bounds.polygamy_chain_low(m, 1.0)[3] == pytest.approx(sum(COA_A), abs=1e-15)
    for v in bounds.polygamy_chain_low(m, 2.0):
        assert v == pytest.approx(63 / 64, abs=1e-15)
    for w in np.linspace(0, 2, 21):
        assert bounds.polygamy_upper_low(w_inputs.coa_B1, w) == pytest.approx(printed_xi(w, COA_B1, (4.5, 11)), abs=1e-12)
        assert bounds.polygamy_upper_low(m, w) == pytest.approx(printed_xi(w, COA_A, (2, 6)), abs=1e-12)


def test_array_exponents_match_scalar_calls():
    m = OrderedMeasures.from_values(EX1, 2.0)
    grid = np.linspace(0, 2, 11)
    batch = bounds.monogamy_lower(m, grid, 0.6)
    assert batch == pytest.approx([bounds.monogamy_lower(m, a, 0.6) for a in grid], rel=1e-14)


def test_monotone_in_s():
    rng = make_rng(21)
    for _ in range(50):
        vals = rng.uniform(0.05, 1, int(rng.integers(2, 6)))
        m = OrderedMeasures.from_values(vals, 2.0)
        grid = np.linspace(m.s_admissible.lo, 1, 30)
        low = np.array([bounds.monogamy_lower(m, 1.2, s) for s in grid])
        assert np.all(np.diff(low) <= 1e-12)
        high = np.array([bounds.polygamy_upper_high(m, 3.5, s) for s in grid])
        assert np.all(np.diff(high) >= -1e-12)
        flat = np.array([bounds.monogamy_lower(m, 2.0, s) for s in grid])
        assert np.ptp(flat) <= 1e-14
        flat = np.array([bounds.polygamy_upper_high(m, 2.0, s) for s in grid])
        assert np.ptp(flat) <= 1e-14


def test_level_two_is_ours_at_s_one():
    rng = make_rng(22)
    for _ in range(200):
        m = OrderedMeasures.from_values(rng.uniform(0.01, 1, int(rng.integers(1, 6))), 2.0)
        a = float(rng.uniform(0, 2))
        assert abs(bounds.monogamy_competitors(m, a)[0] - bounds.monogamy_lower(m, a, 1.0)) <= 1e-12


def test_competitor_orderings_random():
    rng = make_rng(23)
    alphas, betas, omegas = np.linspace(0, 2, 9), np.linspace(2, 6, 9), np.linspace(0, 2, 9)

    def ordered(chain, descending):
        chain = [np.asarray(c) for c in chain]
        pairs = zip(chain, chain[1:])
        if descending:
            return all(np.all(b <= a + 1e-12 * np.abs(a)) for a, b in pairs)
        return all(np.all(a <= b + 1e-12 * np.abs(b)) for a, b in pairs)

    for _ in range(10_000):
        m = OrderedMeasures.from_values(rng.uniform(1e-3, 1, int(rng.integers(1, 8))), 2.0)
        s = bounds.resolve_s(m, "auto-mid")
        assert ordered([bounds.monogamy_lower(m, alphas, s), *bounds.monogamy_competitors(m, alphas)], True)
        assert ordered([bounds.polygamy_upper_high(m, betas, s), *bounds.polygamy_competitors_high(m, betas)], False)
        assert ordered([bounds.polygamy_upper_low(m, omegas), *bounds.polygamy_chain_low(m, omegas)], False)


# -- partition sandwich ------------------------------------------------------


def test_partition_inputs_example(w_inputs):
    assert w_inputs.coa_A.values == pytest.approx(COA_A, abs=1e-15)
    assert w_inputs.coa_B1.values == pytest.approx(COA_B1, abs=1e-15)
    assert w_inputs.sum_sq_A == pytest.approx(63 / 64, abs=1e-15)


def test_sandwich_example_formulas(w_inputs):
    for w in np.linspace(0, 2, 21):
        rep = bounds.sandwich_from_inputs(w_inputs, float(w))
        xi_b1 = printed_xi(w, COA_B1, (4.5, 11))
        xi_a = printed_xi(w, COA_A, (2, 6))
        assert rep.xi_B1 <= rep.xi_A + 1e-15
        assert rep.families["Z1"] == pytest.approx((63 / 64) ** (w / 2) - xi_b1, abs=1e-12)
        assert rep.families["T1"] == pytest.approx(xi_a + xi_b1, abs=1e-12)
        h = w / 2
        base = (63 / 64) ** h - (3 / 4) ** w
        z2 = base - (2**h - 1) * (R2 / 4) ** w - (3**h - 2**h) * (1 / 4) ** w
        z3 = base - (2**h - 1) * ((R2 / 4) ** w + (1 / 4) ** w)
        z4 = base - h * ((R2 / 4) ** w + (1 / 4) ** w)
        assert (rep.families["Z2"], rep.families["Z3"], rep.families["Z4"]) == pytest.approx((z2, z3, z4), abs=1e-12)
        t2 = 2 * (3 / 4) ** w + (2**h - 1) * ((3 * R2 / 8) ** w + (R2 / 4) ** w) + (3**h - 2**h) * ((3 / 8) ** w + (1 / 4) ** w)
        rest = (3 * R2 / 8) ** w + (R2 / 4) ** w + (3 / 8) ** w + (1 / 4) ** w
        t3 = 2 * (3 / 4) ** w + (2**h - 1) * rest
        t4 = 2 * (3 / 4) ** w + h * rest
        assert (rep.families["T2"], rep.families["T3"], rep.families["T4"]) == pytest.approx((t2, t3, t4), abs=1e-12)


def test_sandwich_z4_at_omega_one(w_inputs):
    rep = bounds.sandwich_from_inputs(w_inputs, 1.0)
    expected = (63 / 64) ** 0.5 - 3 / 4 - 0.5 * (R2 / 4 + 1 / 4)
    assert rep.families["Z4"] == pytest.approx(expected, abs=1e-14)
    assert rep.families["Z4"] < 0


def test_sandwich_endpoints(w_inputs):
    rep = bounds.sandwich_from_inputs(w_inputs, 0.0)
    assert rep.lower == 0.0 and rep.upper == 2.0
    rep = bounds.sandwich_from_inputs(w_inputs, 2.0)
    assert rep.families["Z2"] == pytest.approx(rep.families["Z3"]) == pytest.approx(rep.families["Z4"])
    assert rep.families["T2"] == pytest.approx(rep.families["T3"]) == pytest.approx(rep.families["T4"])
    assert rep.lower <= 39 / 64 <= rep.upper


def test_sandwich_contains_independent_value():
    psi = w_class_state(EXAMPLE_W_PARAMS)
    cp = bounds.partition_concurrence(psi)
    assert cp**2 == pytest.approx(39 / 64, abs=1e-14)
    for w in np.linspace(0, 2, 41):
        rep = bounds.partition_sandwich(psi, float(w))
        zs = [rep.families[f"Z{i}"] for i in range(1, 5)]
        ts = [rep.families[f"T{i}"] for i in range(1, 5)]
        assert all(b <= a + 1e-12 for a, b in zip(zs, zs[1:]))
        assert all(a <= b + 1e-12 for a, b in zip(ts, ts[1:]))
        assert rep.lower <= cp**w + 1e-12 <= rep.upper + 2e-12


def test_sandwich_bounds_matches_reports(w_inputs):
    grid = np.linspace(0, 2, 17)
    lower, upper = bounds.sandwich_bounds(w_inputs, grid)
    for w, lo, up in zip(grid, lower, upper):
        rep = bounds.sandwich_from_inputs(w_inputs, float(w))
        assert lo == pytest.approx(rep.lower, abs=1e-15) and up == pytest.approx(rep.upper, abs=1e-15)


def test_sandwich_random_w_class_and_haar():
    rng = make_rng(24)
    grid = np.linspace(0, 2, 11)
    for i in range(2000):
        if i % 2:
            v = np.abs(rng.standard_normal(4))
            psi = w_class_state(WClassParams(tuple(v / np.linalg.norm(v))))
        else:
            psi = random_pure_state(4, int(rng.integers(1 << 31)))
        lower, upper = bounds.sandwich_bounds(bounds.partition_inputs(psi), grid)
        target = bounds.partition_concurrence(psi) ** grid
        assert np.all(lower <= target + 1e-8) and np.all(target <= upper + 1e-8)


def test_sandwich_rejects_small_and_warns_on_zero():
    with pytest.raises(InputError):
        bounds.partition_sandwich(random_pure_state(3, 0), 1.0)
    with pytest.raises(DomainError):
        bounds.partition_sandwich(random_pure_state(4, 0), 2.5)
    psi = w_class_state(WClassParams((0.6, 0.8, 0.0, 0.0)))
    with pytest.warns(UserWarning, match="dropped"):
        rep = bounds.partition_sandwich(psi, 1.0)
    assert rep.lower <= bounds.partition_concurrence(psi) + 1e-12 <= rep.upper + 1e-12


def test_sandwich_competitors_tuple():
    psi = w_class_state(EXAMPLE_W_PARAMS)
    comp = bounds.sandwich_competitors(psi, 1.0)
    rep = bounds.partition_sandwich(psi, 1.0)
    assert comp == tuple(rep.families[k] for k in ("Z2", "Z3", "Z4", "T2", "T3", "T4"))


def test_end_to_end_against_true_concurrence():
    rng = make_rng(25)
    for _ in range(300):
        psi = random_pure_state(int(rng.integers(3, 5)), int(rng.integers(1 << 31)))
        c = pure_concurrence(psi, PartitionSpec((0,), psi.n_qubits))
        mono = OrderedMeasures.from_values(pairwise_measures(psi, 0, "concurrence").values, 2.0)
        poly = OrderedMeasures.from_values(pairwise_measures(psi, 0, "coa").values, 2.0)
        for a in np.linspace(0, 2, 5):
            assert bounds.monogamy_lower(mono, a, bounds.resolve_s(mono)) <= c**a + 1e-8
        for b in np.linspace(2, 6, 5):
            assert bounds.polygamy_upper_high(poly, b, bounds.resolve_s(poly)) >= c**b - 1e-8
        for w in np.linspace(0, 2, 5):
            assert bounds.polygamy_upper_low(poly, w) >= c**w - 1e-8


def test_bound_curve_validation():
    with pytest.raises(InputError):
        bounds.BoundCurve([0, 1], {"ours": [1.0]})
    grid = bounds.default_grid("polygamy-high")
    assert grid[0] == 2 and grid[-1] == 6 and grid.size == 81


def test_product_state_has_no_sandwich_terms():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = bounds.partition_sandwich(basis_state("0000"), 1.0)
    assert rep.lower == 0.0 and rep.upper == 0.0
