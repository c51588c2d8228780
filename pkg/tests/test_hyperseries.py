import math
from fractions import Fraction

import pytest
from sympy import primerange

from trunc_hgm.arith.fields import PrimeField
from trunc_hgm.arith.ntheory import legendre_symbol, rational_mod
from trunc_hgm.arith.poly import DensePolynomial
from trunc_hgm.curves import z0_of
from trunc_hgm.errors import PreconditionError, ResourceLimitError
from trunc_hgm.hyperseries import (
    THREE_F_TWO,
    TWO_F_ONE,
    HypergeometricDatum,
    TruncationLevel,
    check_binomial_reduction,
    check_closed_forms,
    check_cor_5_4,
    check_factorial_congruence_3_3,
    check_lemma_5_1,
    check_p2_factorization,
    check_reflection,
    check_term_vanishing,
    check_truncated_clausen,
    closed_form_numerator,
    closed_form_term_identity_check,
    coefficient_residues,
    coefficient_valuations,
    compute_bracket_and_prime,
    truncated_series_poly,
    truncated_sum_value,
)

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29]
PRIMES_TO_37 = list(primerange(5, 38))


def _exact_coefficients(datum, r_max):
    out, c = [], Fraction(1)
    for r in range(r_max + 1):
        out.append(c)
        for a in datum.alpha:
            c *= a + r
        for b in datum.beta:
            c /= b + r
        c /= r + 1
    return out


@pytest.mark.parametrize("datum", [TWO_F_ONE, THREE_F_TWO], ids=lambda d: d.name)
@pytest.mark.parametrize("p", [5, 7, 11])
def test_coefficient_residues(datum, p):
    """Test c_r mod p and mod p^2 against exact rational coefficients."""
    r_max = 3 * p
    exact = _exact_coefficients(datum, r_max)
    for power in (1, 2):
        got = coefficient_residues(datum, p, r_max, power=power)
        expected = [rational_mod(c, p**power, p) for c in exact]
        assert [int(x) for x in got] == expected, f"{datum.name} mod {p}^{power}"


@pytest.mark.parametrize("r", range(0, 12))
def test_closed_form_numerators(r):
    """The closed forms are the exact coefficients scaled by 432^r and 1728^r."""
    exact_2f1 = _exact_coefficients(TWO_F_ONE, r)[r]
    exact_3f2 = _exact_coefficients(THREE_F_TWO, r)[r]
    assert exact_2f1 * 432**r == closed_form_numerator(TWO_F_ONE, r)
    assert exact_3f2 * 1728**r == closed_form_numerator(THREE_F_TWO, r)
    assert closed_form_numerator(THREE_F_TWO, r) == math.comb(6 * r, 3 * r) * math.comb(
        3 * r, r
    ) * math.comb(2 * r, r)


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("k", [1, 2])
def test_check_closed_forms(p, k):
    """Test the Pochhammer and factorial paths agree."""
    report = check_closed_forms(p, 3 * p, k)
    assert report.passed, f"closed forms fail at p={p}, k={k}: {report.lhs}"


@pytest.mark.parametrize("p", [17, 19, 23])
def test_closed_forms_to_200(p):
    """Both coefficient paths agree mod p^2 for every r <= 200."""
    failing = [r for r in range(201) if not closed_form_term_identity_check(r, p, 2)]
    assert not failing, f"closed forms disagree at p={p} for r in {failing}"


@pytest.mark.parametrize("datum", [TWO_F_ONE, THREE_F_TWO], ids=lambda d: d.name)
@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_coefficients_are_integral(datum, p):
    """v_p(c_r) >= 0 for every r <= 1000."""
    vals = coefficient_valuations(datum, p, 1000)
    assert vals.shape == (1001,)
    assert (vals >= 0).all(), f"{datum.name} has negative valuation at p={p}"


def test_truncation_levels():
    """Test the truncation rules and their validation."""
    assert TruncationLevel.sixth(7).r_max == 1
    assert TruncationLevel.sixth(7, 2).r_max == 8
    assert TruncationLevel.full(5).r_max == 4
    assert TruncationLevel.double(5).r_max == 24
    assert TruncationLevel.sixth(13).consistent_with(13, 1)
    assert not TruncationLevel.sixth(13).consistent_with(13, 2)
    with pytest.raises(ValueError):
        TruncationLevel(3, "p-1")
    with pytest.raises(PreconditionError):
        TruncationLevel.explicit(-1)
    with pytest.raises(PreconditionError):
        truncated_sum_value(TWO_F_ONE, PrimeField(7)(2), TruncationLevel.sixth(7), 7, l=2)


def test_datum_validation():
    """Test that malformed parameter lists are refused."""
    with pytest.raises(PreconditionError):
        HypergeometricDatum((Fraction(1, 2),), (Fraction(1),))
    with pytest.raises(PreconditionError):
        HypergeometricDatum((Fraction(1, 2), Fraction(1, 3)), (Fraction(-2),))


def test_truncated_clausen_p7():
    """At p = 7 the truncated 2F1 is 1 + 5t and its square is 1 + 3t + 4t^2."""
    series = truncated_series_poly(TWO_F_ONE, TruncationLevel.sixth(7), 7)
    assert series.to_list() == [1, 5]
    assert series**2 == DensePolynomial([1, 3, 4], 7)
    assert check_truncated_clausen(7).passed


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("l", [1, 2])
def test_short_sum_is_truncation_of_long(p, l):
    """Cutting the p^2l - 1 sum at p^l - 1 gives the p^l - 1 sum."""
    long_sum = truncated_series_poly(TWO_F_ONE, TruncationLevel.double(p, l), p)
    short = truncated_series_poly(TWO_F_ONE, TruncationLevel.full(p, l), p)
    assert long_sum.truncate(p**l - 1) == short
    assert long_sum.truncate(p**l - 1).degree <= p**l - 1


@pytest.mark.parametrize("p", PRIMES_TO_37)
@pytest.mark.parametrize("l", [1, 2])
def test_term_vanishing(p, l):
    """Every coefficient past floor((p^l-1)/6) and below p^l is divisible by p."""
    report = check_term_vanishing(p, l)
    assert report.passed, f"non-vanishing terms at p={p}, l={l}: {report.detail}"
    if l == 1:
        vals = coefficient_valuations(THREE_F_TWO, p, p - 1)
        assert (vals[: (p - 1) // 6 + 1] == 0).all()


@pytest.mark.parametrize("p", SMALL_PRIMES)
@pytest.mark.parametrize("l", [1, 2])
def test_clausen_and_reflection(p, l):
    """Test truncated Clausen and the reflection t -> 1 - t coefficient-exactly."""
    clausen = check_truncated_clausen(p, l)
    reflection = check_reflection(p, l)
    assert clausen.passed, f"Clausen fails at p={p}, l={l}: {clausen.detail}"
    assert reflection.passed, f"reflection fails at p={p}, l={l}: {reflection.detail}"


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_p2_factorization(p):
    """Test the factorization of the sum truncated at p^2 - 1."""
    report = check_p2_factorization(p, 1)
    assert report.passed, f"factorization fails at p={p}: first difference {report.detail}"


def test_p2_factorization_degree_cap():
    """Degrees over the cap are refused; l = 2 at p = 5 runs under the default cap."""
    with pytest.raises(ResourceLimitError):
        check_p2_factorization(11, 1, degree_cap=100)
    assert check_p2_factorization(5, 2).passed


LIFT_PARAMS = [Fraction(1, 6), Fraction(5, 6), Fraction(1, 2), Fraction(2, 3), Fraction(1, 4)]


def _is_unit(a, p):
    return a.numerator % p != 0 and a.denominator % p != 0


def test_bracket_and_prime():
    """Test [-a]_0 and a' for a = 1/6 at p = 7 and their defining relation."""
    param = compute_bracket_and_prime(Fraction(1, 6), 7)
    assert param.neg_bracket_zero == 1
    assert param.a_prime == Fraction(1, 6)
    for p in PRIMES_TO_37:
        for l in (1, 2):
            for a in LIFT_PARAMS:
                if not _is_unit(a, p):
                    continue
                param = compute_bracket_and_prime(a, p, l)
                assert 0 <= param.neg_bracket_zero < p**l
                assert a + param.neg_bracket_zero == p**l * param.a_prime


@pytest.mark.parametrize("a, p", [(Fraction(5, 3), 5), (Fraction(5, 6), 5), (Fraction(7), 7)])
def test_bracket_needs_unit(a, p):
    """Parameters divisible by p have no bracket and no lift."""
    with pytest.raises(PreconditionError, match="unit"):
        compute_bracket_and_prime(a, p)
    with pytest.raises(PreconditionError, match="unit"):
        check_lemma_5_1(a, p)


def _check_lift(a, p, l, m_max):
    if not _is_unit(a, p):
        with pytest.raises(PreconditionError):
            check_lemma_5_1(a, p, l, m_max=m_max)
        return
    report = check_lemma_5_1(a, p, l, m_max=m_max)
    assert report.passed, f"fails at p={p}, l={l}, a={a}"


@pytest.mark.parametrize("p", PRIMES_TO_37)
@pytest.mark.parametrize("a", LIFT_PARAMS, ids=str)
def test_lemma_5_1_level_one(p, a):
    """(a)_{mp}/(mp)! against (a')_m/m! for all m <= p - 1; non-units are refused."""
    _check_lift(a, p, 1, None)


@pytest.mark.slow
@pytest.mark.parametrize("p", PRIMES_TO_37)
@pytest.mark.parametrize("a", LIFT_PARAMS, ids=str)
def test_lemma_5_1_level_two(p, a):
    """(a)_{mp^2}/(mp^2)! against (a')_m/m! for m <= 200."""
    _check_lift(a, p, 2, 200)


@pytest.mark.parametrize("p", SMALL_PRIMES)
@pytest.mark.parametrize("l", [1, 2])
def test_binomial_reduction(p, l):
    """Pochhammer ratios of 1/6 and 5/6 reduce to binomials of [-a]_0."""
    report = check_binomial_reduction(p, l)
    assert report.passed, f"fails at p={p}, l={l}: {report.detail}"
    A, B = report.detail["[-1/6]_0"], report.detail["[-5/6]_0"]
    assert A + B == p**l - 1
    assert min(A, B) == (p**l - 1) // 6


@pytest.mark.parametrize("l, brackets", [(1, (4, 0)), (2, (4, 20))])
def test_binomial_reduction_non_unit_parameter(l, brackets):
    """5/6 is divisible by 5 but still 5-integral, so p = 5 is checked in full."""
    report = check_binomial_reduction(5, l)
    assert report.passed
    assert (report.detail["[-1/6]_0"], report.detail["[-5/6]_0"]) == brackets


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_cor_5_4(p):
    """For every inert z0 the long sum is (-1/p) times the square of the short one."""
    inert = 0
    for j0 in range(1, p):
        if (j0 - 1728) % p == 0:
            continue
        z0 = z0_of(j0)
        if legendre_symbol(z0, p) == 1:
            with pytest.raises(PreconditionError):
                check_cor_5_4(z0, p)
            continue
        inert += 1
        report = check_cor_5_4(z0, p)
        assert report.passed, f"fails at p={p}, j0={j0}"
        assert report.detail["frobenius_swaps_roots"]
    assert inert > 0


@pytest.mark.parametrize("p", PRIMES_TO_37)
@pytest.mark.parametrize("l", [1, 2])
def test_factorial_congruence(p, l):
    """Test the factorial congruence for every r <= (p^l - 1)/6."""
    report = check_factorial_congruence_3_3(p, l)
    assert report.passed, f"fails at p={p}, l={l}"
