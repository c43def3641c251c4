"""Tests for the exact arithmetic primitives."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from robustcrt import (
    InconsistentResiduesError,
    ModulusSet,
    circular_distance,
    common_remainder,
    crt_single,
    crt_single_noncoprime,
    round_half_up,
)
from oracles import single_solutions


@pytest.mark.parametrize(
    "value,expected",
    [
        (2.0, 2),
        (2.5, 3),
        (-2.5, -2),
        (0.5, 1),
        (-0.5, 0),
        (3, 3),
        (Fraction(5, 2), 3),
        (Fraction(-7, 2), -3),
        (Fraction(3298, 3), 1099),
        (Fraction(5714, 3), 1905),
    ],
)
def test_round_half_up(value, expected):
    assert round_half_up(value) == expected


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), float("-inf")])
def test_round_half_up_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        round_half_up(bad)


@given(st.fractions(max_denominator=1000), st.integers(-10**6, 10**6))
def test_round_half_up_shift_invariance(x, n):
    assert round_half_up(x + n) == round_half_up(x) + n
    residual = x - round_half_up(x)
    assert Fraction(-1, 2) <= residual < Fraction(1, 2)


@pytest.mark.parametrize(
    "x,y,period,expected",
    [
        (17, 17, 100, 0),
        (209, 9, 100, 0),
        (92, -8, 100, 0),
        (99, 7, 100, -8),
        (7, 99, 100, 8),
        (50, 0, 100, -50),
    ],
)
def test_circular_distance_values(x, y, period, expected):
    assert circular_distance(x, y, period) == expected


def test_circular_distance_rejects_bad_period():
    with pytest.raises(ValueError):
        circular_distance(1, 2, 0)
    with pytest.raises(ValueError):
        circular_distance(1, 2, -5)


@given(
    st.integers(-10**6, 10**6),
    st.integers(-10**6, 10**6),
    st.integers(1, 10**4),
)
def test_circular_distance_properties(x, y, period):
    d = circular_distance(x, y, period)
    assert -Fraction(period, 2) <= d < Fraction(period, 2)
    assert circular_distance(x + period, y, period) == d
    assert (d == 0) == ((x - y) % period == 0)


@pytest.mark.parametrize(
    "remainders,expected",
    [((0, 0, 0), 0), ((1, 0, 3), 10), ((0, 3, 4), 18)],
)
def test_crt_single_values(remainders, expected):
    assert crt_single(remainders, (3, 5, 7)) == expected


def test_crt_single_exhaustive_roundtrip():
    moduli = (3, 5, 7)
    for q in range(105):
        assert crt_single([q % mk for mk in moduli], moduli) == q


def test_crt_single_rejects_bad_inputs():
    with pytest.raises(ValueError):
        crt_single((1, 2), (3, 5, 7))
    with pytest.raises(ValueError):
        crt_single((3, 0, 0), (3, 5, 7))
    with pytest.raises(ValueError):
        crt_single((1, 1), (4, 6))


def test_crt_basis_inverse_identity():
    ms = ModulusSet(100, (3, 5, 7))
    for (cofactor, inverse), mk in zip(ms.crt_basis, ms.m):
        assert cofactor * inverse % mk == 1


class TestCrtSingleNoncoprime:
    ms = ModulusSet(100, (3, 5, 7))

    def test_all_equal_remainders(self):
        assert crt_single_noncoprime((42, 42, 42), self.ms) == 42

    def test_example_groups(self):
        assert crt_single_noncoprime((195, 95, 395), self.ms) == 1095
        assert crt_single_noncoprime((69, 169, 69), self.ms) == 2169

    def test_consistent_triple_matches_oracle(self):
        # shares common remainder 98 at every modulus, so it has a solution
        assert single_solutions((98, 98, 398), self.ms) == [4598]
        assert crt_single_noncoprime((98, 98, 398), self.ms) == 4598

    def test_inconsistent_triple_raises(self):
        assert single_solutions((98, 99, 398), self.ms) == []
        with pytest.raises(InconsistentResiduesError):
            crt_single_noncoprime((98, 99, 398), self.ms)
        with pytest.raises(InconsistentResiduesError):
            crt_single_noncoprime((169, 95, 395), self.ms)

    def test_exhaustive_roundtrip_small(self):
        ms = ModulusSet(4, (3, 5, 7))
        for n in range(ms.full_range):
            assert crt_single_noncoprime([n % mk for mk in ms.moduli], ms) == n

    def test_out_of_range_remainder_rejected(self):
        with pytest.raises(ValueError):
            crt_single_noncoprime((300, 0, 0), self.ms)


@pytest.mark.parametrize(
    "value,modulus,expected",
    [(108, 100, 8), (0, 100, 0), (397, 100, 97), (-8, 100, 92), (-100, 100, 0)],
)
def test_common_remainder(value, modulus, expected):
    assert common_remainder(value, modulus) == expected


def test_common_remainder_rejects_bad_modulus():
    with pytest.raises(ValueError):
        common_remainder(5, 0)


class TestModulusSet:
    def test_derived_values(self):
        ms = ModulusSet(100, (3, 5, 7))
        assert ms.moduli == (300, 500, 700)
        assert ms.m_product == 105
        assert ms.full_range == 10500
        assert ms.guarantee

    def test_guarantee_flags(self):
        assert not ModulusSet(10, (2, 3, 5)).guarantee
        assert not ModulusSet(10, (3, 5)).guarantee
        assert ModulusSet(1, (3, 4, 5)).guarantee

    def test_coprime_part(self):
        ms = ModulusSet(100, (3, 5, 7))
        assert ms.coprime_part.M == 1
        assert ms.coprime_part.m == ms.m
        flat = ModulusSet(1, (3, 5, 7))
        assert flat.coprime_part is flat

    @pytest.mark.parametrize(
        "M,m",
        [
            (0, (3, 5, 7)),
            (100, ()),
            (100, (3, 6, 7)),
            (100, (5, 3, 7)),
            (100, (3, 3, 7)),
            (100, (1, 3, 7)),
        ],
    )
    def test_invalid_sets_rejected(self, M, m):
        with pytest.raises(ValueError):
            ModulusSet(M, m)
