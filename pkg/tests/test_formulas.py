"""Closed forms against the oracle and against each other."""
from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np
import pytest

from creditnet.core import CreditNetworkError, build_network
from creditnet.formulas import (
    bankruptcy_bound,
    centralized_failure,
    complete_cut_bound,
    complete_forest_count,
    cycle_class_count,
    cycle_pair_success,
    cycle_success,
    reference_curve,
    tree_success,
)
from creditnet.oracle import exact_failure_probability, exact_pair_success, partition_classes
from creditnet.rates import TransactionMatrix
from creditnet.topology import TopologySpec, generate


def make(kind, n, c):
    net, _ = generate(TopologySpec(kind=kind, n=n, c=c, init="all_toward_low_id"))
    return net


class TestTreeSuccess:
    def test_line_3_1(self):
        assert tree_success(make("line", 3, 1)) == Fraction(5, 12)

    def test_star_closed_form(self):
        # star: (n-1) hub pairs each way at distance 1, rest at distance 2
        for n in (4, 6):
            for c in (1, 3):
                r = Fraction(c, c + 1)
                expected = r * (2 * (n - 1) + (n - 1) * (n - 2) * r) / (n * (n - 1))
                assert tree_success(make("star", n, c)) == expected

    def test_matches_oracle_on_lines_and_stars(self):
        for kind, n in (("line", 4), ("star", 5)):
            for c in (1, 2):
                net = make(kind, n, c)
                failure = exact_failure_probability(net, TransactionMatrix.uniform(n))
                assert tree_success(net) == 1 - failure

    def test_large_capacity_limit(self):
        assert tree_success(make("line", 4, 10 ** 6)) > Fraction(999_990, 1_000_000)

    def test_rejects_non_tree(self):
        with pytest.raises(CreditNetworkError, match="acyclic"):
            tree_success(make("cycle", 3, 1))

    def test_rejects_unequal_totals(self):
        net, _ = build_network([(0, 1, 1, 0), (1, 2, 2, 0)])
        with pytest.raises(CreditNetworkError, match="equal edge totals"):
            tree_success(net)


class TestCycleSuccess:
    def test_cycle_3_1_is_4_sevenths(self):
        assert cycle_success(3, 1) == Fraction(4, 7)

    def test_pair_formula_symmetry(self):
        for n, c in ((5, 1), (6, 2), (7, 3)):
            for l in range(1, n):
                assert cycle_pair_success(n, c, l) == cycle_pair_success(n, c, n - l)

    def test_matches_oracle_per_pair(self):
        for n, c in ((4, 1), (4, 2), (5, 1)):
            net = make("cycle", n, c)
            part = partition_classes(net)
            for l in range(1, n):
                assert exact_pair_success(net, l, 0, partition=part) == cycle_pair_success(n, c, l)

    def test_upper_bound_2r_over_n1_1r(self):
        # exact for uniform rates: E_l[...] <= 2r/((n-1)(1-r))
        for n, c in ((5, 1), (9, 1), (20, 1), (15, 4)):
            r = Fraction(c, c + 1)
            assert cycle_success(n, c) <= 2 * r / ((n - 1) * (1 - r))

    def test_theta_c_over_n_ratio_stability(self):
        for c in (1, 2):
            scaled = [float(cycle_success(n, c)) * n / c for n in (10, 20, 40, 80)]
            assert max(scaled) / min(scaled) < 1.5

    def test_class_count_formula(self):
        assert cycle_class_count(3, 1) == 7
        assert cycle_class_count(3, 2) == 19


class TestCentralizedFailure:
    def test_n2_c2(self):
        assert centralized_failure(2, 2) == Fraction(1, 3)

    def test_no_credit_always_fails(self):
        assert centralized_failure(5, 0) == 1

    def test_large_credit_limit(self):
        assert centralized_failure(5, 10 ** 9) < Fraction(1, 10 ** 8)

    def test_n_below_2_rejected(self):
        with pytest.raises(CreditNetworkError):
            centralized_failure(1, 5)


class TestBankruptcyBound:
    def test_triangle_regular(self):
        info = bankruptcy_bound(make("cycle", 3, 1))
        assert info["degrees"] == [2, 2, 2]
        assert info["bounds"] == [Fraction(1, 3)] * 3
        assert info["harmonic_mean"] == info["arithmetic_mean"] == 2

    def test_star_4_harmonic_mean(self):
        info = bankruptcy_bound(make("star", 4, 1))
        assert info["degrees"] == [3, 1, 1, 1]
        assert info["harmonic_mean"] == Fraction(4, Fraction(1, 3) + 3) == Fraction(6, 5)
        assert float(info["harmonic_mean"]) == 1.2

    def test_harmonic_below_arithmetic(self):
        for kind, n, c in (("star", 6, 2), ("line", 5, 3), ("complete", 4, 1)):
            info = bankruptcy_bound(make(kind, n, c))
            assert info["harmonic_mean"] <= info["arithmetic_mean"]


class TestCompleteCutBound:
    def test_n2_reduces_to_single_edge(self):
        for c in (1, 2, 5):
            assert complete_cut_bound(2, c) == Fraction(1, c + 1)

    def test_forest_counts(self):
        assert complete_forest_count(1, 3) == 1
        assert complete_forest_count(2, 3) == 4
        assert complete_forest_count(3, 1) == 7
        assert complete_forest_count(5, 1) == 291  # forests on 5 labeled nodes

    def test_bounds_exact_failure_k4(self):
        for c in (1, 2):
            net = make("complete", 4, c)
            part = partition_classes(net)
            pair_failure = 1 - exact_pair_success(net, 0, 1, partition=part)
            assert complete_cut_bound(4, c) >= pair_failure

    def test_probability_like_for_moderate_size(self):
        assert 0 < complete_cut_bound(6, 2) < 1


class TestReferenceCurves:
    def test_gnp_conjecture_value(self):
        assert reference_curve("gnp_conjecture", n=100, p=0.1, c=5) == pytest.approx(0.96)

    def test_complete_centralized_matches_formula(self):
        for n, c in ((5, 1), (10, 3)):
            expected = float(centralized_failure(n, comb(n, 2) * c))
            assert reference_curve("complete_centralized", n=n, c=c) == pytest.approx(expected)

    def test_ba_centralized_limit(self):
        # (n-1)/(ndc+n-1) -> 1/(dc+1); Theta(1/dc) as stated
        d, c = 5, 2
        value = reference_curve("ba_centralized", n=10 ** 9, d=d, c=c)
        assert value == pytest.approx(1 / (d * c + 1), rel=1e-6)

    def test_unknown_kind(self):
        with pytest.raises(CreditNetworkError, match="unknown reference"):
            reference_curve("banana", n=1)

    def test_missing_param(self):
        with pytest.raises(CreditNetworkError, match="missing parameter"):
            reference_curve("gnp_conjecture", n=100, p=0.1)


class TestProbabilityRange:
    def test_all_outputs_in_unit_interval(self):
        probes = [
            tree_success(make("line", 5, 2)),
            cycle_success(6, 2),
            centralized_failure(4, 7),
            complete_cut_bound(4, 1),
        ]
        for value in probes:
            assert 0 <= value <= 1
