from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultradiam.chains import ultrametric_from_chain
from ultradiam.core import DistanceMatrix, Partition, spectrum
from ultradiam.dipgraph import NotMultipartite, SimpleGraph, dip_report, is_complete_multipartite
from ultradiam.errors import CapExceeded, DegenerateSpace
from ultradiam.oracle import (
    brute_axiom_failure,
    brute_diam,
    brute_dip_pairs,
    brute_multipartite_search,
    brute_violation,
    random_chain,
    random_graph,
    random_non_star_ultrametric,
    random_partition,
    random_ultrametric,
    random_value_set,
    rgs_to_partition,
    set_partitions,
)

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]


class TestGenerators:
    def test_deterministic(self):
        assert random_ultrametric(7, 3, 5) == random_ultrametric(7, 3, 5)
        assert random_partition(9, 2) == random_partition(9, 2)
        assert random_chain(6, 1) == random_chain(6, 1)
        assert random_graph(6, 3) == random_graph(6, 3)
        assert random_value_set(5, 8) == random_value_set(5, 8)

    def test_depth_bounds_spectrum(self):
        s = random_ultrametric(5, 3, 42)
        assert s.n == 5
        assert len(spectrum(s)) - 1 <= 3

    def test_non_star(self):
        for seed in range(30):
            s = random_non_star_ultrametric(3 + seed % 6, 3, seed)
            assert not dip_report(s).equality
        with pytest.raises(ValueError):
            random_non_star_ultrametric(2, 1, 0)

    def test_partition_min_parts(self):
        for seed in range(20):
            assert random_partition(6, seed).k >= 2
        with pytest.raises(ValueError):
            random_partition(1, 0)

    def test_chain_valid(self):
        for seed in range(20):
            ultrametric_from_chain(random_chain(2 + seed % 8, seed))

    def test_value_set(self):
        v = random_value_set(6, 1)
        assert len(v) == 6 and F(0) in v and min(v) == 0
        assert random_value_set(1, 1) == {F(0)}


class TestBrute:
    def test_violation(self):
        m = DistanceMatrix.from_rows([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        assert brute_violation(m) == (0, 1, 2)
        m = DistanceMatrix.from_rows([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert brute_violation(m) is None

    def test_diam(self, two_level):
        assert brute_diam(two_level.matrix, [0, 1]) == F(1, 2)
        assert brute_diam(two_level.matrix, [1, 2]) == 1
        assert brute_diam(two_level.matrix, [2]) == 0

    def test_dip_pairs(self, two_level, equilateral3, one_point):
        assert brute_dip_pairs(two_level) == {(0, 2), (2, 0), (1, 2), (2, 1)}
        assert len(brute_dip_pairs(equilateral3)) == 6
        with pytest.raises(DegenerateSpace):
            brute_dip_pairs(one_point)

    @pytest.mark.parametrize("n", range(9))
    def test_bell_numbers(self, n):
        rgs = list(set_partitions(n))
        assert len(rgs) == BELL[n]
        assert rgs == sorted(rgs)
        if n:
            assert len({rgs_to_partition(r) for r in rgs}) == BELL[n]

    def test_search_examples(self):
        assert brute_multipartite_search(SimpleGraph.complete(4)) == Partition.of([[0], [1], [2], [3]])
        star = SimpleGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert brute_multipartite_search(star) == Partition.of([[0], [1, 2, 3]])
        path = SimpleGraph.from_edges(3, [(0, 1), (1, 2)])
        assert brute_multipartite_search(path) == Partition.of([[0, 2], [1]])
        p4 = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert isinstance(brute_multipartite_search(p4), NotMultipartite)
        assert isinstance(brute_multipartite_search(SimpleGraph(0, frozenset())), NotMultipartite)
        with pytest.raises(CapExceeded):
            brute_multipartite_search(SimpleGraph.complete(11))

    def test_axiom_failure(self):
        from ultradiam.diamfn import DiameterFunction

        t = DiameterFunction(2, {0b01: 0, 0b10: 0, 0b11: 1})
        assert brute_axiom_failure(t, 2) is None
        bad = {1: 0, 2: 0, 4: 0, 3: 1, 6: 1, 5: 3, 7: 3}
        assert brute_axiom_failure(DiameterFunction(3, bad), 3) == (1, 4, 2)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32))
def test_search_agrees_with_recognizer(n, seed):
    g = random_graph(n, seed)
    brute = brute_multipartite_search(g)
    fast = is_complete_multipartite(g)
    assert isinstance(brute, Partition) == isinstance(fast, Partition)
    if isinstance(fast, Partition):
        assert brute == fast
