import numpy as np
import pytest

from bailnet import (
    Allocation,
    LiabilityNetwork,
    NetworkValidationError,
    clearing_uniqueness_gap,
    clearing_vector,
    default_tolerance,
    outcome_metrics,
    picard_clearing,
    relative_liabilities,
    validate,
)

from conftest import make_random_network, picard_reference


def two_node() -> LiabilityNetwork:
    # node 0 owes 10 to node 1 and holds 4 in cash
    return LiabilityNetwork(np.array([[0.0, 10.0], [0.0, 0.0]]),
                            np.array([4.0, 0.0]))


class TestValidation:
    def test_rejects_non_square(self):
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.zeros((2, 3)), np.zeros(2))

    def test_rejects_cash_length_mismatch(self):
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.zeros((2, 2)), np.zeros(3))

    def test_rejects_negative_liability(self):
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.array([[0.0, -1.0], [0.0, 0.0]]), np.zeros(2))

    def test_rejects_negative_cash(self):
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.zeros((2, 2)), np.array([-0.5, 0.0]))

    def test_rejects_self_liability(self):
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.array([[1.0, 0.0], [0.0, 0.0]]), np.zeros(2))

    def test_rejects_non_finite(self):
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.array([[0.0, np.inf], [0.0, 0.0]]), np.zeros(2))
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.zeros((2, 2)), np.array([np.nan, 0.0]))

    def test_rejects_label_mismatch(self):
        with pytest.raises(NetworkValidationError):
            LiabilityNetwork(np.zeros((2, 2)), np.zeros(2), node_labels=("a",))

    def test_validate_passes_good_network(self):
        validate(two_node())

    def test_arrays_are_read_only(self):
        net = two_node()
        with pytest.raises(ValueError):
            net.liabilities[0, 1] = 99.0

    def test_from_edge_list_sums_duplicates(self):
        net = LiabilityNetwork.from_edge_list(
            [0.0, 0.0], [(0, 1, 3.0), (0, 1, 4.0)])
        assert net.liabilities[0, 1] == 7.0


class TestAllocation:
    def test_zeros_and_single(self):
        z = Allocation.zeros(3)
        assert z.total == 0.0
        s = Allocation.single(3, 1, 5.0)
        assert s.c[1] == 5.0 and s.total == 5.0

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Allocation.from_amounts([-1.0, 2.0])

    def test_rejects_total_mismatch(self):
        with pytest.raises(ValueError):
            Allocation(np.array([1.0, 2.0]), total=5.0)


class TestRelativeLiabilities:
    def test_rows_are_shares(self):
        net = LiabilityNetwork(np.array([[0.0, 6.0, 2.0],
                                         [0.0, 0.0, 0.0],
                                         [4.0, 0.0, 0.0]]),
                               np.zeros(3))
        rel = relative_liabilities(net)
        assert np.allclose(rel.pbar, [8.0, 0.0, 4.0])
        assert np.allclose(rel.pi[0], [0.0, 0.75, 0.25])
        assert np.allclose(rel.pi[1], 0.0)  # no obligations, zero row
        assert np.allclose(rel.pi[2], [1.0, 0.0, 0.0])


class TestClearingExamples:
    def test_two_node_shortfall(self):
        out = clearing_vector(two_node())
        assert np.allclose(out.p, [4.0, 0.0])
        assert out.unpaid_total == pytest.approx(6.0)
        assert out.defaults == frozenset({0})

    def test_two_node_with_injection(self):
        out = clearing_vector(two_node(), Allocation.single(2, 0, 6.0))
        assert np.allclose(out.p, [10.0, 0.0])
        assert out.n_defaults == 0
        assert out.unpaid_total == pytest.approx(0.0)

    def test_received_and_funds_reported(self):
        out = clearing_vector(two_node())
        assert np.allclose(out.q, [0.0, 4.0])
        assert np.allclose(out.r, [4.0, 4.0])

    def test_cycle_clears_in_full_without_cash(self):
        # 3-cycle with no cash: full payment is self-consistent and is
        # the greatest fixed point.
        liab = np.zeros((3, 3))
        liab[0, 1] = liab[1, 2] = liab[2, 0] = 10.0
        net = LiabilityNetwork(liab, np.zeros(3))
        out = clearing_vector(net)
        assert np.allclose(out.p, 10.0)
        assert out.n_defaults == 0

    def test_empty_network_of_isolated_nodes(self):
        net = LiabilityNetwork(np.zeros((3, 3)), np.array([1.0, 0.0, 2.0]))
        out = clearing_vector(net)
        assert np.allclose(out.p, 0.0)
        assert out.n_defaults == 0


class TestClearingProperties:
    def test_matches_independent_reference_on_random_networks(self, rng):
        for _ in range(120):
            n = int(rng.integers(2, 21))
            net = make_random_network(rng, n)
            c = rng.uniform(0.0, 3.0, n) * (rng.random(n) < 0.5)
            expected = picard_reference(net.liabilities, net.cash, c)
            out = clearing_vector(net, Allocation.from_amounts(c))
            assert np.max(np.abs(out.p - expected)) < 1e-6

    def test_library_picard_agrees_with_fictitious_default(self, rng):
        for _ in range(30):
            net = make_random_network(rng, int(rng.integers(2, 15)))
            out = clearing_vector(net)
            pic = picard_clearing(net, start="pbar")
            assert np.max(np.abs(out.p - pic)) < 1e-6

    def test_fixed_point_residual(self, rng):
        for _ in range(30):
            net = make_random_network(rng, int(rng.integers(2, 15)))
            rel = relative_liabilities(net)
            out = clearing_vector(net, rel=rel)
            phi = np.minimum(rel.pbar, rel.pi.T @ out.p + net.cash)
            tol = 1e-6 * np.maximum(1.0, rel.pbar)
            assert np.all(np.abs(out.p - phi) <= tol)

    def test_monotone_in_cash_injection(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 12))
            net = make_random_network(rng, n)
            c1 = rng.uniform(0.0, 2.0, n)
            c2 = c1 + rng.uniform(0.0, 2.0, n)
            out1 = clearing_vector(net, Allocation.from_amounts(c1))
            out2 = clearing_vector(net, Allocation.from_amounts(c2))
            assert np.all(out2.p >= out1.p - 1e-9)
            assert out2.unpaid_total <= out1.unpaid_total + 1e-9

    def test_non_defaulters_pay_in_full(self, rng):
        for _ in range(25):
            net = make_random_network(rng, int(rng.integers(2, 15)))
            rel = relative_liabilities(net)
            out = clearing_vector(net, rel=rel)
            paid_in_full = np.ones(net.n, dtype=bool)
            for i in out.defaults:
                paid_in_full[i] = False
            assert np.allclose(out.p[paid_in_full], rel.pbar[paid_in_full])

    def test_scale_covariance(self, rng):
        net = make_random_network(rng, 8)
        c = rng.uniform(0.0, 2.0, 8)
        out = clearing_vector(net, Allocation.from_amounts(c))
        s = 37.5
        scaled = LiabilityNetwork(net.liabilities * s, net.cash * s)
        out_s = clearing_vector(scaled, Allocation.from_amounts(c * s))
        assert np.allclose(out_s.p, out.p * s)
        assert out_s.defaults == out.defaults
        assert out_s.unpaid_total == pytest.approx(out.unpaid_total * s)


class TestUniquenessDiagnostic:
    def test_mutual_debt_without_cash_is_ambiguous(self):
        # 0 and 1 owe each other with no cash: both full payment at the
        # small scale and total default are fixed points.
        net = LiabilityNetwork(np.array([[0.0, 10.0], [5.0, 0.0]]),
                               np.zeros(2))
        gap = clearing_uniqueness_gap(net)
        assert gap == pytest.approx(5.0)

    def test_cash_rich_network_is_unique(self, rng):
        net = make_random_network(rng, 6, cash_scale=100.0)
        assert clearing_uniqueness_gap(net) < 1e-9

    def test_picard_from_zero_reaches_least_fixed_point(self):
        liab = np.zeros((3, 3))
        liab[0, 1] = liab[1, 2] = liab[2, 0] = 10.0
        net = LiabilityNetwork(liab, np.zeros(3))
        least = picard_clearing(net, start="zero")
        assert np.allclose(least, 0.0)
        assert clearing_uniqueness_gap(net) == pytest.approx(10.0)


class TestOutcomeMetrics:
    def test_default_tolerance_is_scale_aware(self):
        pbar = np.array([0.5, 2000.0])
        tol = default_tolerance(pbar)
        assert tol[0] == pytest.approx(1e-6)
        assert tol[1] == pytest.approx(2e-3)

    def test_near_full_payment_is_not_default(self):
        net = two_node()
        p = np.array([10.0 - 1e-8, 0.0])
        unpaid, defaults, n_defaults = outcome_metrics(net, p)
        assert n_defaults == 0
        assert unpaid == pytest.approx(1e-8, abs=1e-9)

    def test_rejects_overpayment(self):
        net = two_node()
        with pytest.raises(ValueError):
            outcome_metrics(net, np.array([11.0, 0.0]))
