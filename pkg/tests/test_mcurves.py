"""Divisor arithmetic on the curve side, the F-curve intersection form, and
the positivity scan."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fcone.combinat import (
    FourPartition,
    Subset,
    enumerate_four_partitions,
    shape_of,
)
from fcone.kmaps import canonical_class, k_build, pullback_alpha
from fcone.mcurves import (
    MDivisor,
    Verdict,
    f_curve_value,
    f_positivity,
    m_linear_combine,
)


def lemma_divisor_m5():
    """-3 psi_5 plus the sum of boundary keys over 3-subsets avoiding 5."""
    terms = [(-3, MDivisor.psi(5, 5))]
    for labels in itertools.combinations(range(1, 5), 3):
        terms.append((1, MDivisor.delta(labels, 5)))
    return m_linear_combine(terms)


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=12)


def mdivisors(m):
    keys = st.integers(1, (1 << m) - 2).map(lambda mask: Subset(mask, m))
    return st.dictionaries(keys, rationals, max_size=6).map(lambda d: MDivisor(m, d))


class TestMDivisor:
    def test_keys_canonicalized_and_merged(self):
        H = MDivisor(
            5,
            {
                Subset.from_labels([1, 2], 5): Fraction(1),
                Subset.from_labels([3, 4, 5], 5): Fraction(2),
            },
        )
        # {3,4,5} is the complement of {1,2}; the two entries merge
        assert H.coefficient([1, 2]) == 3
        assert H.coefficient([3, 4, 5]) == 3
        assert len(H.coeffs) == 1

    def test_size_m_minus_one_normalizes_to_singleton(self):
        H = MDivisor.delta([1, 2, 3, 4], 5)
        assert H.coefficient([5]) == 1
        assert H.coefficient([1, 2, 3, 4]) == 1

    def test_full_and_empty_keys_rejected(self):
        with pytest.raises(ValueError):
            MDivisor(5, {Subset.from_labels(range(1, 6), 5): Fraction(1)})
        with pytest.raises(ValueError):
            MDivisor(5, {Subset(0, 5): Fraction(1)})

    def test_boundary_keys_need_four_markings(self):
        with pytest.raises(ValueError):
            MDivisor(3, {Subset.from_labels([1, 2], 3): Fraction(1)})
        # psi keys are fine below four markings
        assert MDivisor.psi(1, 3).coefficient([1]) == -1

    def test_zero_coefficients_dropped(self):
        H = MDivisor(5, {Subset.from_labels([1, 2], 5): Fraction(0)})
        assert H.is_zero()

    def test_json_round_trip_and_psi_sign(self):
        H = lemma_divisor_m5()
        data = H.to_json_dict()
        # -3 psi_5 sits on the singleton key {5} with coefficient +3
        assert data["psi"] == {"5": "3"}
        assert MDivisor.from_json_dict(data) == H

    def test_json_accepts_either_side_of_a_split(self):
        data = {"m": 5, "psi": {}, "delta": {"1,2,3": "1", "4,5": "2"}}
        H = MDivisor.from_json_dict(data)
        assert H.coefficient([1, 2, 3]) == 3

    @given(mdivisors(6))
    @settings(max_examples=60)
    def test_json_round_trip_random(self, H):
        assert MDivisor.from_json_dict(H.to_json_dict()) == H

    @given(mdivisors(6))
    @settings(max_examples=60)
    def test_complement_consistency(self, H):
        for S in H.support():
            if 2 <= S.size <= H.m - 2:
                assert H.coefficient(S) == H.coefficient(S.complement())


class TestLinearCombine:
    def test_identity_and_inverse(self):
        H = lemma_divisor_m5()
        other = MDivisor.delta([1, 5], 5)
        assert m_linear_combine([(1, H), (0, other)]) == H
        assert m_linear_combine([(1, H), (-1, H)]).is_zero()

    def test_matches_alpha_pullback_of_lemma_divisor(self):
        pulled = pullback_alpha(canonical_class(4) + k_build(4, combo={4: 1}))
        assert pulled == lemma_divisor_m5()

    def test_mismatched_ambient_rejected(self):
        with pytest.raises(ValueError):
            m_linear_combine([(1, MDivisor.zero(5)), (1, MDivisor.zero(6))])
        with pytest.raises(ValueError):
            m_linear_combine([])

    def test_operators(self):
        H = lemma_divisor_m5()
        assert H - H == MDivisor.zero(5)
        assert Fraction(1, 2) * (H + H) == H


class TestFCurveValue:
    def test_lemma_value_on_listed_partition(self):
        P = FourPartition.parse("{1}|{2}|{3}|{4,5}", 5)
        assert f_curve_value(lemma_divisor_m5(), P) == -1

    def test_lemma_value_constant_over_all_partitions(self):
        H = lemma_divisor_m5()
        values = [f_curve_value(H, P) for P in enumerate_four_partitions(5)]
        assert len(values) == 10
        assert set(values) == {Fraction(-1)}

    def test_second_lemma_constant_minus_quarter(self):
        D = k_build(5, combo={2: Fraction(1, 4), 4: Fraction(1, 4), 5: 1})
        H = pullback_alpha(canonical_class(5) + D)
        P = FourPartition.parse("{1}|{2}|{6}|{3,4,5}", 6)
        assert f_curve_value(H, P) == Fraction(-1, 4)
        values = [f_curve_value(H, Q) for Q in enumerate_four_partitions(6)]
        assert len(values) == 65
        assert set(values) == {Fraction(-1, 4)}

    def test_zero_divisor(self):
        P = FourPartition.parse("{1}|{2}|{3}|{4,5}", 5)
        assert f_curve_value(MDivisor.zero(5), P) == 0

    def test_size_mismatch_rejected(self):
        P = FourPartition.parse("{1}|{2}|{3}|{4,5}", 5)
        with pytest.raises(ValueError):
            f_curve_value(MDivisor.zero(6), P)

    @given(st.tuples(mdivisors(6), mdivisors(6), rationals, rationals))
    @settings(max_examples=50)
    def test_linearity(self, args):
        H1, H2, a, b = args
        combined = m_linear_combine([(a, H1), (b, H2)])
        for P in itertools.islice(enumerate_four_partitions(6), 0, 65, 13):
            assert f_curve_value(combined, P) == a * f_curve_value(
                H1, P
            ) + b * f_curve_value(H2, P)

    @given(st.tuples(mdivisors(6), st.permutations(list(range(1, 7)))))
    @settings(max_examples=50)
    def test_equivariance(self, args):
        H, sigma = args
        for P in itertools.islice(enumerate_four_partitions(6), 0, 65, 13):
            assert f_curve_value(H.relabel(sigma), P.relabel(sigma)) == f_curve_value(H, P)


class TestFPositivity:
    def test_lemma_divisor_anti_ample(self):
        decision = f_positivity(lemma_divisor_m5(), "negative")
        assert decision.verdict is Verdict.POSITIVE
        assert decision.witness is None

    def test_canonical_alone_fails_with_zero_value_witness(self):
        H = pullback_alpha(canonical_class(4))
        decision = f_positivity(H, "negative")
        assert decision.verdict is Verdict.NOT_POSITIVE
        assert decision.witness_value == 0
        # the violating stratum keeps label 5 in a block of its own
        assert shape_of(decision.witness, 5).special_part_size == 1
        assert shape_of(decision.witness).sizes == (1, 1, 1, 2)

    def test_zero_divisor_never_strictly_positive(self):
        decision = f_positivity(MDivisor.zero(5), "positive")
        assert decision.verdict is Verdict.NOT_POSITIVE
        assert decision.witness_value == 0

    def test_nonstrict_mode(self):
        decision = f_positivity(MDivisor.zero(5), "positive", strict=False)
        assert decision.verdict is Verdict.POSITIVE
        assert decision.strict is False

    def test_all_witnesses_listed_in_order(self):
        H = pullback_alpha(canonical_class(4))
        decision = f_positivity(H, "negative", all_witnesses=True)
        assert len(decision.violations) == 6
        assert decision.violations[0].partition == decision.witness
        order = [v.partition.sort_key() for v in decision.violations]
        assert order == sorted(order)
        assert all(v.value == 0 for v in decision.violations)

    def test_undecided_beyond_known_range(self):
        keys = {
            Subset(mask, 8): Fraction(1)
            for mask in range(1, (1 << 8) - 1)
            if 0 < Subset(mask, 8).size < 8
        }
        H = MDivisor(8, keys)  # every F-value is 3 - 4 = -1
        decision = f_positivity(H, "negative")
        assert decision.verdict is Verdict.POSITIVE_BUT_UNDECIDED

    def test_antisymmetry_of_sense(self):
        for H in (lemma_divisor_m5(), pullback_alpha(canonical_class(4))):
            neg = f_positivity(H, "negative", all_witnesses=True)
            pos = f_positivity(m_linear_combine([(-1, H)]), "positive", all_witnesses=True)
            assert neg.verdict == pos.verdict
            assert neg.witness == pos.witness
            assert [v.partition for v in neg.violations] == [
                v.partition for v in pos.violations
            ]

    def test_threaded_scan_matches_sequential(self):
        H = pullback_alpha(canonical_class(4))
        seq = f_positivity(H, "negative", all_witnesses=True)
        par = f_positivity(H, "negative", all_witnesses=True, threads=4)
        assert seq == par
        assert f_positivity(H, "negative", threads=3).witness == seq.witness

    def test_too_few_markings_rejected(self):
        with pytest.raises(ValueError):
            f_positivity(MDivisor.psi(1, 3), "positive")
