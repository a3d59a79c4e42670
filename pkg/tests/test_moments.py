"""Joint-moment coefficients, reference constants, and derived ratios."""

import math
from fractions import Fraction

import pytest

from zgap.arith import factorial, multinomial
from zgap.moments import (
    SOURCE_PARTITION_SUM,
    SOURCE_REFERENCE_TABLE,
    arithmetic_factor,
    coefficient_column,
    cue_moment_coefficient,
    hall_ratio,
    joint_moment_coefficient,
    moment_exponent,
    moment_ratio,
    moment_records,
    ratio_set_from_values,
    tabulated_coefficient,
)

G_VALUES = {1: 1, 2: 2, 3: 42, 4: 24024}


def test_cue_moment_coefficient_examples():
    assert cue_moment_coefficient(1) == 1
    assert cue_moment_coefficient(2) == Fraction(1, 12)
    assert cue_moment_coefficient(2) * factorial(4) == 2
    assert cue_moment_coefficient(3) == Fraction(1, 8640)
    assert cue_moment_coefficient(3) * factorial(9) == 42


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_g_value_normalization(l):
    assert cue_moment_coefficient(l) * factorial(l * l) == G_VALUES[l]


def test_moment_exponent():
    for l in (1, 3, 5):
        assert moment_exponent(0, l, 7, 0) == l * l
    for h, l in ((0, 1), (2, 3), (4, 4)):
        assert moment_exponent(h, l, 1, 0) == l * l + 2 * h
    # direct substitution: l^2 + 2*h*n1 + 2*(l-h)*n2
    assert moment_exponent(4, 4, 2, 1) == 16 + 2 * 4 * 2 + 0 == 32
    assert moment_exponent(2, 4, 2, 1) == 16 + 8 + 4
    with pytest.raises(ValueError):
        moment_exponent(5, 4, 2, 1)


def test_partition_sum_base_case_by_direct_summation():
    # h=0, l=1: only k=0 contributes, m0+m1 = 2; the three summands are
    # (m0,m1) = (0,2), (1,1), (2,0) with values 1/3!, -(1/2)*2/2!, (1/4)*1/1!
    direct = Fraction(0)
    for m0, m1 in ((0, 2), (1, 1), (2, 0)):
        direct += (
            Fraction(-1, 2) ** m0
            * multinomial(2, [m0, m1])
            * Fraction(1, factorial(2 + m1 - 1))
        )
    assert -direct == Fraction(1, 12)  # prefactor (-1)^(1-0+0) = -1
    assert joint_moment_coefficient(0, 1) == Fraction(1, 12)


def test_partition_sum_rejects_bad_arguments():
    with pytest.raises(ValueError):
        joint_moment_coefficient(5, 4)
    with pytest.raises(ValueError):
        joint_moment_coefficient(-1, 2)


@pytest.mark.parametrize("h", [0, 1, 2, 3, 4])
def test_partition_sum_reproduces_reference_column(h):
    assert joint_moment_coefficient(h, 4) == tabulated_coefficient(h, 1)


def test_reference_table_examples():
    assert tabulated_coefficient(1, 1) == Fraction(
        71, 2**22 * 3**9 * 5**4 * 7**2 * 11**2 * 13 * 17
    )
    assert tabulated_coefficient(0, 2) == Fraction(
        103 * 413129,
        2**28 * 3**12 * 5**5 * 7**3 * 11**2 * 13**2 * 17 * 19 * 23,
    )
    assert tabulated_coefficient(4, 2) == Fraction(
        449 * 1721279377,
        2**36 * 3**10 * 5**7 * 7**4 * 11**3 * 13**3 * 17**2 * 19 * 23 * 31,
    )


def test_reference_table_cross_column_identity():
    assert tabulated_coefficient(4, 1) == tabulated_coefficient(0, 2)


def test_reference_table_out_of_range():
    with pytest.raises(KeyError):
        tabulated_coefficient(5, 1)
    with pytest.raises(KeyError):
        tabulated_coefficient(0, 3)


@pytest.mark.parametrize("n", [1, 2])
def test_ratio_normalization_and_positivity(n):
    for h in range(5):
        value = moment_ratio(h, 4, n)
        assert value > 0
    assert moment_ratio(4, 4, n) == 1


def test_ratio_spot_checks():
    b = coefficient_column(1)
    assert moment_ratio(3, 4, 1) == Fraction(1, 4) * b[3] / b[4]
    b2 = coefficient_column(2)
    assert moment_ratio(0, 4, 2) == Fraction(1, 4) ** 4 * b2[0] / b2[4]


HALL_RATIOS = {
    (1, 1): Fraction(5797, 213),
    (2, 1): Fraction(2974545, 149081),
    (3, 1): Fraction(87212385, 21783251),
    (4, 1): Fraction(501014773, 638284305),
    (1, 2): Fraction(81913152475, 4033246857),
    (2, 2): Fraction(84698183997, 5727828727),
    (3, 2): Fraction(2823819562411, 933497701947),
    (4, 2): Fraction(13933317551283, 22412778767917),
}


@pytest.mark.parametrize("h,n", sorted(HALL_RATIOS))
def test_hall_ratios_exact(h, n):
    assert hall_ratio(h, n) == HALL_RATIOS[(h, n)]


def test_ratio_set_from_values_matches_module_functions():
    ratios = ratio_set_from_values(coefficient_column(1), n=1)
    assert ratios.capB[4] == 1
    assert ratios.A == {h: hall_ratio(h, 1) for h in range(1, 5)}


def test_moment_records_sources_and_serialization():
    records = moment_records(4, (2, 1))
    sources = {r.source for r in records}
    assert sources == {SOURCE_PARTITION_SUM, SOURCE_REFERENCE_TABLE}
    by_key = {}
    for r in records:
        by_key.setdefault(r.h, set()).add(r.value)
    assert all(len(values) == 1 for values in by_key.values())  # sources agree
    payload = records[0].to_json_dict()
    assert payload["source"] == SOURCE_PARTITION_SUM
    assert Fraction(int(payload["numerator"]), int(payload["denominator"])) == records[0].value

    table_only = moment_records(4, (3, 2))
    assert {r.source for r in table_only} == {SOURCE_REFERENCE_TABLE}
    with pytest.raises(ValueError):
        moment_records(3, (3, 2))
    with pytest.raises(ValueError):
        moment_records(4, (4, 3))


def test_arithmetic_factor_telescopes_for_l1():
    estimate = arithmetic_factor(1, prime_cutoff=10_000)
    assert abs(estimate.value - 1.0) <= max(estimate.error_bound, 1e-9)
    assert abs(estimate.value - 1.0) < 1e-9


def test_arithmetic_factor_l2_against_closed_form():
    # for l=2 each factor is exactly 1 - 1/p^2 (inner sum in closed form),
    # so the product converges to 6/pi^2
    cutoff = 10_000
    estimate = arithmetic_factor(2, prime_cutoff=cutoff)
    assert 0 < estimate.value < 1
    partial = 1.0
    for p in _primes(cutoff):
        partial *= 1.0 - 1.0 / (p * p)
    assert abs(estimate.value - partial) <= estimate.error_bound
    assert abs(estimate.value - 6 / math.pi**2) <= estimate.error_bound + 2e-4


def test_arithmetic_factor_monotone_in_cutoff():
    previous = None
    for cutoff in (100, 1_000, 10_000):
        estimate = arithmetic_factor(2, prime_cutoff=cutoff)
        if previous is not None:
            assert estimate.value < previous
        previous = estimate.value


def test_arithmetic_factor_self_consistency():
    coarse = arithmetic_factor(4, prime_cutoff=1_000)
    fine = arithmetic_factor(4, prime_cutoff=10_000)
    assert abs(coarse.value - fine.value) <= coarse.error_bound + fine.error_bound


def _primes(n):
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [i for i, flag in enumerate(sieve) if flag]
