from fractions import Fraction

import pytest

from p4forge.families import CLASS_IDS, bull
from p4forge.graphs import LabeledGraph, path_graph
from p4forge.patterns import (
    PatternError,
    assignment_series,
    binary_patterns,
    brute_force_pattern_count,
    count_trees,
    enumerate_trees,
    expected_occurrences_exact,
    iter_assignments,
    marked_tree_census,
    occ_count_series,
    pattern_series,
    prime_pattern_series,
    small_pattern_census,
    subtree_probability_exact,
)
from p4forge.series import graph_count
from p4forge.trees import (
    flip,
    join_node,
    leaf,
    linear_node,
    prime_node,
    union_node,
)


def all_small_patterns():
    """The 22 substitution trees with two or three leaves."""
    pats = [join_node([leaf(1), leaf(2)]), union_node([leaf(1), leaf(2)])]
    pats += [
        linear_node(k, [leaf(1), leaf(2), leaf(3)]) for k in ("join", "union")
    ]
    for center in (1, 2, 3):
        ends = [x for x in (1, 2, 3) if x != center]
        p3 = LabeledGraph.build([1, 2, 3], [(center, ends[0]), (center, ends[1])])
        pats.append(prime_node(p3, [leaf(1), leaf(2), leaf(3)]))
        p3bar = LabeledGraph.build([1, 2, 3], [(ends[0], ends[1])])
        pats.append(prime_node(p3bar, [leaf(1), leaf(2), leaf(3)]))
    for lone in (1, 2, 3):
        pair = [x for x in (1, 2, 3) if x != lone]
        for rk in ("join", "union"):
            for ik in ("join", "union"):
                pats.append(
                    linear_node(rk, [leaf(lone), linear_node(ik, [leaf(p) for p in pair])])
                )
    assert len({t.canonical_key() for t in pats}) == 22
    return pats


class TestEnumeration:
    def test_cograph_two(self):
        trees = list(enumerate_trees("cograph", 2))
        assert len(trees) == 2

    def test_cograph_three(self):
        assert count_trees("cograph", 3) == 8

    def test_reducible_four(self):
        assert count_trees("reducible", 4) == 64

    def test_trees_distinct(self):
        for cid in ("sparse", "extendible"):
            seen = set()
            for t in enumerate_trees(cid, 5):
                k = t.canonical_key()
                assert k not in seen
                seen.add(k)

    def test_bound(self):
        with pytest.raises(PatternError):
            list(enumerate_trees("cograph", 10))


class TestAssignments:
    def test_prime_pattern_three_typings(self):
        # a single prime node admits plain, empty-slot and marked-slot roles
        tau = prime_node(path_graph(4), [leaf(i) for i in range(1, 5)])
        kinds = sorted(
            (len(pa.v0), len(pa.v1), len(pa.v2), len(pa.v3)) for pa in iter_assignments(tau)
        )
        assert kinds == [(0, 0, 1, 0)] * 4 + [(0, 1, 0, 0), (1, 0, 0, 0)]

    def test_linear_root_can_stay_untyped(self):
        tau = join_node([leaf(1), leaf(2)])
        kinds = {(len(pa.v0), len(pa.v1), len(pa.v2), len(pa.v3)) for pa in iter_assignments(tau)}
        assert (0, 0, 0, 0) in kinds

    def test_blocked_pattern_is_empty(self):
        # a prime pattern node with two non-leaf children matches nothing
        tau = prime_node(
            path_graph(4),
            [join_node([leaf(1), leaf(2)]), join_node([leaf(3), leaf(4)]), leaf(5), leaf(6)],
        )
        assert list(iter_assignments(tau)) == []
        assert all(v == 0 for v in pattern_series(tau, "tidy", 8).c)

    def test_assignment_series_example(self):
        # cograph, untyped join pair: the closed product of grammar series
        from p4forge.series import class_bundle

        tau = join_node([leaf(1), leaf(2)])
        pa = next(
            p for p in iter_assignments(tau) if not (p.v0 or p.v1 or p.v2 or p.v3)
        )
        got = assignment_series(pa, "cograph", 9)
        b = class_bundle("cograph", 7)
        expect = (
            b.slot_join
            * b.nonjoin_deriv
            * b.nonjoin_deriv
            * b.exp_nonjoin
        ).shift_z(2, 9)
        assert got == expect


class TestOracle:
    @pytest.mark.parametrize("cid", CLASS_IDS)
    def test_all_small_patterns_n5(self, cid):
        census = {}
        for n in range(2, 6):
            census[n] = small_pattern_census(cid, n)
        for tau in all_small_patterns():
            series = pattern_series(tau, cid, 5)
            for n in range(tau.size, 6):
                assert int(series[n]) == census[n].get(tau.canonical_key(), 0), (cid, tau, n)

    def test_join_pair_small_counts(self):
        assert brute_force_pattern_count(join_node([leaf(1), leaf(2)]), "cograph", 2) == 2

    def test_pattern_larger_than_tree(self):
        tau = join_node([leaf(i) for i in range(1, 4)])
        assert brute_force_pattern_count(tau, "cograph", 2) == 0

    def test_generic_census_matches_fast(self):
        for cid in ("cograph", "extendible"):
            fast = {k: v for k, v in small_pattern_census(cid, 4).items() if v}
            merged = dict(marked_tree_census(cid, 4, 2))
            merged.update(marked_tree_census(cid, 4, 3))
            assert fast == merged


class TestInvolution:
    def test_flip_invariance(self):
        for cid in ("cograph", "sparse", "tidy"):
            for tau in all_small_patterns():
                a = pattern_series(tau, cid, 6)
                b = pattern_series(flip(tau), cid, 6)
                assert a == b, (cid, tau)

    def test_relabeling_invariance(self):
        tau1 = linear_node("join", [leaf(3), linear_node("union", [leaf(1), leaf(2)])])
        tau2 = linear_node("join", [leaf(1), linear_node("union", [leaf(2), leaf(3)])])
        for cid in ("reducible", "lite"):
            assert pattern_series(tau1, cid, 6) == pattern_series(tau2, cid, 6)


class TestPrimeSpecialization:
    @pytest.mark.parametrize("cid", CLASS_IDS)
    def test_path_pattern(self, cid):
        tau = prime_node(path_graph(4), [leaf(i) for i in range(1, 5)])
        assert pattern_series(tau, cid, 8) == prime_pattern_series(path_graph(4), cid, 8)

    def test_bull_pattern(self):
        tau = prime_node(bull(), [leaf(i) for i in range(1, 6)])
        for cid in ("reducible", "tidy"):
            assert pattern_series(tau, cid, 8) == prime_pattern_series(bull(), cid, 8)

    def test_reducible_occ_is_slot_series(self):
        # constant occurrence series collapse the product
        from p4forge.series import class_bundle

        got = prime_pattern_series(path_graph(4), "reducible", 9)
        b = class_bundle("reducible", 5)
        blos = occ_count_series(path_graph(4), "reducible", "blossomed", 5)
        plain = occ_count_series(path_graph(4), "reducible", "plain", 5)
        expect = (b.slot_any * (b.trees * blos + plain)).shift_z(4, 9)
        assert got == expect


class TestExpectations:
    def test_cograph_path_vanishes(self):
        for n in (4, 8, 20):
            assert expected_occurrences_exact(path_graph(4), "cograph", n) == 0

    def test_reducible_exact_at_four(self):
        val = expected_occurrences_exact(path_graph(4), "reducible", 4)
        assert val == Fraction(2 * 12, 64) == Fraction(3, 8)

    def test_matches_average_over_population(self):
        # direct averaging over the enumerated population
        from p4forge.graphs import count_occurrences
        from p4forge.trees import graph_of

        for cid in ("reducible", "tidy"):
            for n in (4, 5):
                total = 0
                count = 0
                for t in enumerate_trees(cid, n):
                    total += count_occurrences(path_graph(4), graph_of(t))
                    count += 1
                assert expected_occurrences_exact(path_graph(4), cid, n) == Fraction(
                    total, count
                ), (cid, n)

    def test_tidy_trend_to_constant(self):
        val = expected_occurrences_exact(path_graph(4), "tidy", 200)
        assert abs(float(val) / 200 - 0.29200322) < 0.1 * 0.292

    def test_prime_required(self):
        from p4forge.graphs import cycle_graph

        with pytest.raises(PatternError):
            expected_occurrences_exact(cycle_graph(4), "tidy", 5)


class TestSubtreeProbability:
    def test_pair_probability_half_exact(self):
        for cid in CLASS_IDS:
            for n in (2, 3, 7, 25):
                pj = subtree_probability_exact(join_node([leaf(1), leaf(2)]), cid, n)
                pu = subtree_probability_exact(union_node([leaf(1), leaf(2)]), cid, n)
                assert pj == pu == Fraction(1, 2), (cid, n)

    def test_smallest_case(self):
        assert subtree_probability_exact(join_node([leaf(1), leaf(2)]), "cograph", 2) == Fraction(1, 2)

    def test_triple_shapes_sum_below_one(self):
        pats = binary_patterns(3)
        assert len(pats) == 12
        total = sum(subtree_probability_exact(t, "sparse", 30) for t in pats)
        assert total < 1

    def test_n_too_small(self):
        with pytest.raises(PatternError):
            subtree_probability_exact(join_node([leaf(1), leaf(2)]), "tidy", 1)


class TestOccCountSeries:
    def test_matches_rational_series(self):
        from p4forge.asymptotics import occ_series

        for cid in CLASS_IDS:
            for mode in ("plain", "blossomed", ("anchored", 2)):
                a = occ_count_series(path_graph(4), cid, mode, 25).to_power_series()
                b = occ_series(path_graph(4), cid, mode, 25)
                assert a == b, (cid, mode)

    def test_polynomial_path_agrees_with_direct(self):
        # bull pattern exercises degree-five interpolation
        from p4forge.asymptotics import occ_series

        for cid in ("sparse", "tidy"):
            a = occ_count_series(bull(), cid, "blossomed", 20).to_power_series()
            b = occ_series(bull(), cid, "blossomed", 20)
            assert a == b, cid
