"""Type normalization, candidate enumeration, and plumbing conversion."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadlens.exact import mod_inverse
from quadlens.singtypes import (
    InvalidType,
    LensPair,
    Plumbing,
    SingularityType,
    canonical_q_values,
    count_case1,
    enumerate_case1,
    enumerate_cases23,
    euler_phi,
    inversion_class_count,
    normalize,
    parse_type_literal,
    plumbing_of,
    unit_square_root_count,
)


def lens_pair_strategy(max_p=400):
    def build(p, seed):
        qs = [q for q in range(1, p) if math.gcd(q, p) == 1]
        return (p, qs[seed % len(qs)])

    return st.builds(build, st.integers(2, max_p), st.integers(0, 10**6))


class TestNormalize:
    def test_q_replaced_by_smaller_inverse(self):
        t = normalize([(2, 1), (3, 2), (5, 3), (7, 5)])
        # 3^-1 = 2 mod 5, 5^-1 = 3 mod 7
        assert t.pairs == (LensPair(2, 1), LensPair(3, 2), LensPair(5, 2), LensPair(7, 3))

    def test_sorts_by_order(self):
        t = normalize([(9409, 5519), (5, 1), (3, 2), (2, 1)])
        assert t.orders == (2, 3, 5, 9409)
        assert t.pairs[3] == LensPair(9409, 5519)  # 5519 < 5519^-1 = 6625

    def test_idempotent(self):
        t = normalize([(2, 1), (3, 1), (7, 6), (19, 2)])
        again = normalize([(lp.p, lp.q) for lp in t.pairs])
        assert again == t

    def test_rejects_shared_order_factor(self):
        with pytest.raises(InvalidType):
            normalize([(2, 1), (3, 2), (5, 1), (27, 5)])

    def test_rejects_noncoprime_pair(self):
        with pytest.raises(InvalidType):
            LensPair(9, 6)

    def test_rejects_out_of_range_q(self):
        with pytest.raises(InvalidType):
            LensPair(5, 5)
        with pytest.raises(InvalidType):
            LensPair(5, 0)

    @given(st.lists(lens_pair_strategy(), min_size=4, max_size=4))
    def test_inverse_representative_invariance(self, raws):
        orders = [p for p, _ in raws]
        if any(math.gcd(a, b) != 1 for a, b in itertools.combinations(orders, 2)):
            return
        flipped = [
            (p, mod_inverse(q, p)) if p > 2 else (p, q) for p, q in raws
        ]
        assert normalize(raws) == normalize(flipped)

    @given(st.permutations([(2, 1), (3, 2), (5, 4), (9409, 6625)]))
    def test_input_order_irrelevant(self, perm):
        assert normalize(perm) == normalize([(2, 1), (3, 2), (5, 4), (9409, 5519)])


class TestParse:
    def test_literal_roundtrip(self):
        t = parse_type_literal("2/1,3/2,5/1,9409/5519")
        assert t.orders == (2, 3, 5, 9409)
        assert str(t) == "2/1,3/2,5/1,9409/5519"

    def test_canonicalizes(self):
        assert parse_type_literal("7/5,3/1,2/1,13/1").pairs[2] == LensPair(7, 3)

    def test_bad_literals(self):
        for bad in ("2/1,3/2,5/1", "2/1,3/2,5/1,9409", "a/b,3/2,5/1,7/1"):
            with pytest.raises(InvalidType):
                parse_type_literal(bad)


class TestCounting:
    def test_unit_square_roots(self):
        assert unit_square_root_count(2) == 1
        assert unit_square_root_count(4) == 2
        assert unit_square_root_count(8) == 4
        assert unit_square_root_count(9409) == 2  # 97^2
        assert unit_square_root_count(4771) == 4  # 13 * 367
        assert unit_square_root_count(105) == 8

    @given(st.integers(2, 3000))
    def test_unit_square_roots_brute(self, n):
        assert unit_square_root_count(n) == sum(
            1 for x in range(n) if x * x % n == 1
        )

    def test_phi(self):
        assert euler_phi(1) == 1
        assert euler_phi(97) == 96
        assert euler_phi(9409) == 97 * 96
        assert [euler_phi(n) for n in (7, 11, 25)] == [6, 10, 20]

    def test_inversion_classes_small(self):
        assert inversion_class_count(2) == 1
        assert inversion_class_count(7) == 4
        assert inversion_class_count(25) == 11
        assert inversion_class_count(9409) == (97 * 96 + 2) // 2

    @given(st.integers(2, 500))
    def test_inversion_classes_match_representatives(self, p):
        assert inversion_class_count(p) == len(list(canonical_q_values(p)))


class TestEnumerateCases23:
    def test_total_and_split(self):
        types = list(enumerate_cases23())
        assert len(types) == 1092
        case2 = [t for t in types if t.orders[2] == 7]
        case3 = [t for t in types if t.orders[2] == 11]
        assert len(case2) == 1008
        assert len(case3) == 84
        assert len(case2) + len(case3) == len(types)

    def test_per_fourth_order_counts(self):
        counts = {}
        for t in enumerate_cases23():
            if t.orders[2] == 7:
                counts[t.orders[3]] = counts.get(t.orders[3], 0) + 1
        assert counts == {
            11: 48, 13: 56, 17: 72, 19: 80, 23: 96,
            25: 88, 29: 120, 31: 128, 37: 152, 41: 168,
        }

    def test_all_canonical_and_distinct(self):
        types = list(enumerate_cases23())
        assert len(set(types)) == len(types)
        for t in types:
            assert normalize([(lp.p, lp.q) for lp in t.pairs]) == t

    def test_golden_members(self):
        types = set(enumerate_cases23())
        assert normalize([(2, 1), (3, 1), (7, 6), (19, 2)]) in types
        assert normalize([(2, 1), (3, 2), (11, 2), (13, 3)]) in types
        assert normalize([(2, 1), (3, 1), (7, 2), (25, 3)]) in types


class TestEnumerateCase1:
    def test_stream_ordering_and_canonicality(self):
        types = list(enumerate_case1(7, 60))
        keys = [(t.orders[3], t.pairs[2].q, t.pairs[3].q) for t in types]
        assert keys == sorted(keys)
        assert all(math.gcd(t.orders[3], 30) == 1 for t in types)
        assert all(t.pairs[1] == LensPair(3, 2) for t in types)
        for t in types[:50]:
            assert normalize([(lp.p, lp.q) for lp in t.pairs]) == t

    def test_golden_member(self):
        types = list(enumerate_case1(9409, 9409, q3_values=(1,)))
        wanted = normalize([(2, 1), (3, 2), (5, 1), (9409, 5519)])
        assert wanted in types

    def test_count_formula_matches_stream(self):
        assert count_case1(7, 500) == len(list(enumerate_case1(7, 500)))
        assert count_case1(7, 2000) == len(list(enumerate_case1(7, 2000)))

    def test_small_window(self):
        # p4 = 7: 4 classes; p4 = 11: 6; p4 = 13: 7; each for 3 choices of q3
        assert count_case1(7, 13) == 3 * (4 + 6 + 7)


class TestPlumbing:
    def test_worked_example_chains(self):
        t = normalize([(2, 1), (3, 2), (5, 1), (9409, 5519)])
        pl = plumbing_of(t)
        assert pl.chains == (
            (-2,),
            (-2, -2),
            (-5,),
            (-2, -4, -2, -3, -4, -4, -3, -4, -2, -2),
        )
        assert pl.size == 14

    def test_reversed_orientation(self):
        t = normalize([(2, 1), (3, 1), (7, 6), (19, 2)])
        std = plumbing_of(t, "standard")
        rev = plumbing_of(t, "reversed")
        assert std.chains == ((-2,), (-3,), (-2,) * 6, (-10, -2))
        assert rev.chains == ((-2,), (-2, -2), (-7,), (-2,) * 8 + (-3,))

    def test_rejects_unknown_orientation(self):
        t = normalize([(2, 1), (3, 2), (5, 1), (7, 1)])
        with pytest.raises(ValueError):
            plumbing_of(t, "flipped")

    def test_adjacency_respects_chain_boundaries(self):
        t = normalize([(2, 1), (3, 2), (11, 2), (13, 1)])
        pl = plumbing_of(t)
        assert pl.chains == ((-2,), (-2, -2), (-6, -2), (-13,))
        assert pl.size == 6
        assert list(pl.adjacent_pairs()) == [(1, 2), (3, 4)]
        assert pl.is_adjacent(1, 2) and pl.is_adjacent(3, 4)
        assert not pl.is_adjacent(0, 1)
        assert not pl.is_adjacent(2, 3)
        assert not pl.is_adjacent(4, 5)
        assert pl.vertex_chain_ids() == (0, 1, 1, 2, 2, 3)

    def test_weights_view(self):
        pl = Plumbing(((-2,), (-3, -2)))
        assert pl.weights == (-2, -3, -2)
        assert pl.size == 3
