from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultradiam.diamfn import (
    DiameterFunction,
    ball,
    ball_radii,
    check_axioms,
    check_ball_dichotomy,
    mask_of,
    members,
    synthesize_ultrametric,
    tau_from_space,
)
from ultradiam.errors import AxiomViolation, CapExceeded, EmptySubset, ParseError, ShapeError
from ultradiam.oracle import brute_axiom_failure, brute_diam, random_ultrametric


def step_tau(n):
    """0 on singletons, 1 on every larger subset."""
    return DiameterFunction(n, {m: 0 if bin(m).count("1") == 1 else 1 for m in range(1, 1 << n)})


def one_one_three():
    # points a=0, b=1, c=2; tau{a,b}=tau{b,c}=1, tau{a,c}=tau{a,b,c}=3
    table = {0b001: 0, 0b010: 0, 0b100: 0, 0b011: 1, 0b110: 1, 0b101: 3, 0b111: 3}
    return DiameterFunction(3, table)


class TestTable:
    def test_one_point(self, one_point):
        t = tau_from_space(one_point)
        assert list(t.items()) == [(1, 0)]

    def test_equilateral(self, equilateral3):
        t = tau_from_space(equilateral3)
        for m, v in t.items():
            assert v == (0 if len(members(m)) == 1 else 1)

    def test_two_level(self, two_level):
        t = tau_from_space(two_level)
        assert t[[0, 1]] == F(1, 2)
        for m, v in t.items():
            pts = members(m)
            if 2 in pts and len(pts) > 1:
                assert v == 1

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 9), st.integers(0, 2**32))
    def test_matches_brute_diameters(self, n, seed):
        s = random_ultrametric(n, 4, seed)
        t = tau_from_space(s)
        lazy = tau_from_space(s, lazy=True)
        for m, v in t.items():
            assert v == brute_diam(s.matrix, members(m)) == lazy[m]

    def test_cap(self, equilateral3):
        with pytest.raises(CapExceeded):
            tau_from_space(equilateral3, cap=2)
        lazy = tau_from_space(equilateral3, lazy=True)
        assert not lazy.dense and lazy.materialize().dense

    def test_missing_subset(self):
        with pytest.raises(ShapeError):
            DiameterFunction(2, {1: 0, 2: 0})

    def test_empty_subset(self, equilateral3):
        with pytest.raises(EmptySubset):
            tau_from_space(equilateral3)[0]

    def test_json_round_trip(self, two_level):
        t = tau_from_space(two_level)
        back = DiameterFunction.from_json(t.to_json())
        assert back == t

    def test_json_rejects_duplicates(self):
        raw = '{"n": 1, "entries": [{"subset": [0], "value": "0"}, {"subset": [0], "value": "0"}]}'
        with pytest.raises(ParseError):
            DiameterFunction.from_json(raw)


class TestAxioms:
    def test_from_space_passes(self, equilateral3, two_level):
        for s in (equilateral3, two_level):
            rep = check_axioms(tau_from_space(s))
            assert rep.ok and rep.witness is None and rep.mode == "exhaustive"

    def test_one_one_three_witness(self):
        t = one_one_three()
        assert brute_axiom_failure(t, 3) == (0b001, 0b100, 0b010)
        rep = check_axioms(t)
        assert rep.i1_ok and not rep.i2_ok
        w = rep.witness
        assert w.clause == "i2"
        assert [members(m) for m in w.subsets] == [[0], [2], [1]]
        assert w.values == (3, 1, 1)

    def test_step_function_passes(self):
        t = step_tau(4)
        assert brute_axiom_failure(t, 4) is None
        rep = check_axioms(t)
        assert rep.ok and rep.triples_checked == 15 ** 3

    def test_i1_failure(self):
        table = {m: (0 if m in (1, 2, 3) else 1) for m in range(1, 8)}
        rep = check_axioms(DiameterFunction(3, table))
        assert not rep.i1_ok and rep.witness.clause == "i1"
        assert members(rep.witness.subsets[0]) == [0, 1]

    def test_singleton_nonzero_breaks_i1(self):
        table = {m: 1 for m in range(1, 4)}
        rep = check_axioms(DiameterFunction(2, table))
        assert not rep.i1_ok and rep.witness.subsets == (1,)

    def test_sampled_mode(self):
        s = random_ultrametric(8, 4, 5)
        rep = check_axioms(tau_from_space(s), samples=5000, seed=3)
        assert rep.ok and rep.mode == "sampled" and rep.triples_checked == 5000

    def test_sampled_finds_failure(self):
        s = random_ultrametric(7, 3, 1)
        t = tau_from_space(s)
        values = [None] + [t[m] for m in range(1, 1 << 7)]
        values[0b1111111] = values[0b1111111] + 1  # whole set now exceeds its pairs
        bad = DiameterFunction(7, values)
        rep = check_axioms(bad, samples=50_000, seed=0)
        assert not rep.i2_ok
        a, b, c = rep.witness.subsets
        assert bad[a | b] > max(bad[a | c], bad[c | b])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32))
    def test_isotone_and_pair_max(self, n, seed):
        t = tau_from_space(random_ultrametric(n, 4, seed))
        assert check_axioms(t).ok
        for a, va in t.items():
            assert va >= 0
            sub = a
            while sub:
                assert t[sub] <= va
                sub = (sub - 1) & a
            pts = members(a)
            if len(pts) >= 2:
                assert va == max(t[[x, y]] for x, y in combinations(pts, 2))


class TestSynthesis:
    def test_step_gives_equilateral(self):
        s = synthesize_ultrametric(step_tau(3))
        assert s.entries == ((0, 1, 1), (1, 0, 1), (1, 1, 0))

    def test_reproduces_two_level(self, two_level):
        assert synthesize_ultrametric(tau_from_space(two_level)).entries == two_level.entries

    def test_zero_on_pair(self):
        table = {m: (0 if m in (1, 2, 4, 3) else 1) for m in range(1, 8)}
        with pytest.raises(AxiomViolation) as exc:
            synthesize_ultrametric(DiameterFunction(3, table))
        assert exc.value.witness["clause"] == "i1"

    def test_one_one_three_rejected(self):
        with pytest.raises(AxiomViolation):
            synthesize_ultrametric(one_one_three())

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**32))
    def test_round_trip(self, n, seed):
        s = random_ultrametric(n, 4, seed)
        assert synthesize_ultrametric(tau_from_space(s)) == s


class TestBalls:
    def test_radius_zero(self, equilateral3):
        b = ball(tau_from_space(equilateral3), [0], 0)
        assert b.members == {mask_of([0])}

    def test_radius_one_is_everything(self, equilateral3):
        t = tau_from_space(equilateral3)
        expected = {m for m in range(1, 8) if brute_diam(equilateral3.matrix, members(m | 1)) <= 1}
        assert expected == set(range(1, 8))
        assert ball(t, [0], 1).members == expected

    def test_empty_below_center_value(self, equilateral3):
        b = ball(tau_from_space(equilateral3), [0, 1], F(1, 2))
        assert b.members == frozenset()

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 2**32))
    def test_empty_iff_radius_below_center(self, n, seed):
        t = tau_from_space(random_ultrametric(n, 3, seed))
        for a in range(1, 1 << n):
            for r in ball_radii(t):
                b = ball(t, a, r)
                assert (not b.members) == (r < t[a])
                if b.members:
                    sub = a
                    while sub:
                        assert sub in b.members
                        sub = (sub - 1) & a

    def test_radii(self, two_level):
        assert ball_radii(tau_from_space(two_level)) == [0, F(1, 4), F(1, 2), 1]

    def test_dichotomy_success(self, equilateral3, two_level, one_point):
        for s in (equilateral3, two_level, one_point):
            rep = check_ball_dichotomy(tau_from_space(s))
            assert rep.ok and rep.counterexample is None

    def test_dichotomy_on_bad_tau(self):
        rep = check_ball_dichotomy(one_one_three())
        # the failure is reported, and a brute-force recheck confirms it
        assert not rep.ok
        ce = rep.counterexample
        t = one_one_three()
        if ce["kind"] == "recentering":
            r = F(ce["radius"])
            assert ball(t, ce["center"], r).members != ball(t, ce["member"], r).members
        else:
            b1 = ball(t, ce["A1"], F(ce["r1"])).members
            b2 = ball(t, ce["A2"], F(ce["r2"])).members
            assert b1 & b2 and not b2 <= b1

    def test_cap(self):
        with pytest.raises(CapExceeded):
            check_ball_dichotomy(tau_from_space(random_ultrametric(6, 2, 0)))
