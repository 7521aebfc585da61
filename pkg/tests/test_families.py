import math
from itertools import permutations

import pytest

from p4forge.graphs import (
    all_labeled_graphs,
    are_isomorphic,
    blossom_quotient,
    complete_graph,
    cycle_graph,
    path_graph,
)
from p4forge.families import (
    CLASS_IDS,
    FamilyError,
    bull,
    c5_graph,
    classify_prime_decoration,
    fat_spider,
    get_class,
    is_member,
    is_member_definitional,
    labeled_elements,
    p5_graph,
    p5bar_graph,
    pseudo_spider,
    thin_spider,
)
from p4forge.trees import graph_of


def automorphism_count(g):
    n = g.num_labeled
    count = 0
    for perm in permutations(range(1, n + 1)):
        if g.relabel({i + 1: perm[i] for i in range(n)}) == g:
            count += 1
    return count


class TestConstructions:
    def test_thin_spider_shape(self):
        g = thin_spider(3)
        assert g.n == 6 and g.edge_count() == 3 + 3

    def test_fat_spider_is_complement_of_thin(self):
        from p4forge.graphs import complement

        for k in (3, 4):
            assert are_isomorphic(fat_spider(k), complement(thin_spider(k)))

    def test_bull(self):
        g = bull()
        assert sorted(g.degree(i) for i in range(5)) == [1, 1, 2, 3, 3]

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_spider_automorphisms(self, k):
        assert automorphism_count(thin_spider(k)) == math.factorial(k)
        assert automorphism_count(thin_spider(k, blossom=True)) == math.factorial(k)
        if k >= 3:
            assert automorphism_count(fat_spider(k)) == math.factorial(k)

    @pytest.mark.parametrize("k", [2, 3])
    def test_pseudo_spider_automorphisms(self, k):
        for fat in [False] if k == 2 else [False, True]:
            for origin in ("K", "S"):
                for edge in (True, False):
                    g = pseudo_spider(k, fat, origin, edge)
                    assert automorphism_count(g) == 2 * math.factorial(k - 1)

    def test_orbit_representatives_pairwise_non_isomorphic(self):
        for m, blossomed in ((4, False), (5, False), (5, True), (6, False), (7, False), (7, True)):
            orbits = get_class("tidy").orbits(m, blossomed)
            for i in range(len(orbits)):
                for j in range(i + 1, len(orbits)):
                    assert not are_isomorphic(orbits[i].rep, orbits[j].rep), (
                        m,
                        blossomed,
                        orbits[i].name,
                        orbits[j].name,
                    )

    def test_labeled_elements_counts(self):
        for cid in CLASS_IDS:
            spec = get_class(cid)
            for m in range(8):
                for blossomed in (False, True):
                    assert len(labeled_elements(cid, m, blossomed)) == spec.labeled_count(
                        m, blossomed
                    )


class TestClassification:
    def test_sporadics(self):
        assert classify_prime_decoration(c5_graph()).tag == "C5"
        assert classify_prime_decoration(p5_graph()).tag == "P5"
        assert classify_prime_decoration(p5bar_graph()).tag == "P5bar"

    def test_plain_bull(self):
        kind = classify_prime_decoration(bull())
        assert kind.tag == "ThinSpider" and kind.k == 2 and kind.r_label == 5
        assert not kind.blossomed

    def test_blossomed_bull(self):
        kind = classify_prime_decoration(thin_spider(2, blossom=True))
        assert kind.tag == "ThinSpider" and kind.k == 2 and kind.blossomed

    def test_spiders(self):
        assert classify_prime_decoration(thin_spider(4)).tag == "ThinSpider"
        assert classify_prime_decoration(fat_spider(3)).tag == "FatSpider"
        assert classify_prime_decoration(path_graph(4)).tag == "ThinSpider"

    def test_duplicated_endpoint_path(self):
        kind = classify_prime_decoration(pseudo_spider(2, False, "S", True))
        assert kind.tag == "PseudoSpider" and kind.k == 2
        assert kind.origin == "S" and kind.twin_edge is True

    def test_other(self):
        assert classify_prime_decoration(cycle_graph(6)).tag == "Other"
        assert classify_prime_decoration(complete_graph(4)).tag == "Other"

    def test_classification_of_all_orbit_reps(self):
        for cid in ("tidy", "extendible", "sparse"):
            spec = get_class(cid)
            for m in range(4, 9):
                for blossomed in (False, True):
                    for orbit in spec.orbits(m, blossomed):
                        kind = classify_prime_decoration(orbit.rep)
                        assert kind.tag != "Other", (cid, m, orbit.name)


class TestMembership:
    def test_cographs_in_every_class(self):
        for g in all_labeled_graphs(4):
            if is_member(g, "cograph"):
                for cid in CLASS_IDS:
                    assert is_member(g, cid)

    def test_c5_rows(self):
        g = c5_graph()
        expect = {
            "tidy": True,
            "extendible": True,
            "lite": False,
            "sparse": False,
            "reducible": False,
            "cograph": False,
        }
        for cid, val in expect.items():
            assert is_member(g, cid) == val, cid
            assert is_member_definitional(g, cid) == val, cid

    def test_p5_rows(self):
        g = p5_graph()
        expect = {
            "tidy": True,
            "lite": True,
            "extendible": True,
            "sparse": False,
            "reducible": False,
            "cograph": False,
        }
        for cid, val in expect.items():
            assert is_member(g, cid) == val, cid

    def test_p4_reducible_definitional(self):
        assert is_member_definitional(path_graph(4), "reducible")

    def test_p5_not_sparse_definitional(self):
        assert not is_member_definitional(p5_graph(), "sparse")

    def test_six_spider_is_lite(self):
        # three induced four-paths, admissible by the spider exception
        assert is_member_definitional(thin_spider(3), "lite")
        assert is_member(thin_spider(3), "lite")

    def test_definitional_bound(self):
        with pytest.raises(FamilyError):
            is_member_definitional(complete_graph(11), "lite")

    @pytest.mark.parametrize("n", range(1, 6))
    def test_recognizer_equivalence(self, n):
        for g in all_labeled_graphs(n):
            for cid in CLASS_IDS:
                assert is_member(g, cid) == is_member_definitional(g, cid), (g.edges(), cid)

    @pytest.mark.slow
    def test_recognizer_equivalence_n6(self):
        for g in all_labeled_graphs(6):
            for cid in CLASS_IDS:
                assert is_member(g, cid) == is_member_definitional(g, cid), (g.edges(), cid)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_inclusion_chain(self, n):
        chains = [
            ("cograph", "reducible"),
            ("reducible", "sparse"),
            ("reducible", "extendible"),
            ("sparse", "lite"),
            ("lite", "tidy"),
            ("extendible", "tidy"),
        ]
        for g in all_labeled_graphs(n):
            member = {cid: is_member(g, cid) for cid in CLASS_IDS}
            for small, big in chains:
                assert not member[small] or member[big], (g.edges(), small, big)


class TestConsistencyConditions:
    def test_tree_to_graph_injective(self):
        # distinct grammar trees of one family give distinct graphs (n <= 6)
        from p4forge.patterns import enumerate_trees

        for cid in CLASS_IDS:
            for n in range(1, 7):
                seen = set()
                for t in enumerate_trees(cid, n):
                    g = graph_of(t).key()
                    assert g not in seen, (cid, n)
                    seen.add(g)

    def test_c2_no_plain_element_with_slot_quotient(self):
        # collapsing a singleton of a plain decoration never lands in the
        # slot family
        for cid in CLASS_IDS:
            spec = get_class(cid)
            for m in (4, 5, 6):
                for orbit in spec.orbits(m, False):
                    g = orbit.rep
                    slot_keys = {
                        h.key() for h in labeled_elements(cid, m - 1, True)
                    }
                    for v in sorted(g.label_set):
                        q = blossom_quotient(g, [v])
                        assert q.key() not in slot_keys, (cid, m, orbit.name, v)

    def test_c5_slot_modules_trivial(self):
        # slot decorations: modules containing the slot are trivial
        from p4forge.graphs import all_modules

        for cid in ("tidy", "extendible"):
            spec = get_class(cid)
            for m in (4, 5, 6):
                for orbit in spec.orbits(m, True):
                    g = orbit.rep
                    star = 1 << g.blossom_indices[0]
                    full = (1 << g.n) - 1
                    for mod in all_modules(g):
                        if mod & star:
                            assert mod in (star, full), (cid, m, orbit.name)
