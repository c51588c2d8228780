from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from sympy import primerange

from trunc_hgm.arith.fields import PrimeField, QuadExtField
from trunc_hgm.arith.ntheory import legendre_symbol
from trunc_hgm.curves import (
    TraceRecord,
    WeierstrassCurve,
    branch_of,
    build_E0,
    build_E1_general,
    build_E1_reduced,
    check_cor_3_2,
    check_hypotheses,
    check_prop_3_4,
    check_root_square_criterion,
    check_squares_equal,
    check_twist_gamma,
    count_points,
    e1_model_chain,
    frobenius_trace,
    quadratic_layer,
    twist_gamma,
    z0_of,
)
from trunc_hgm.errors import (
    BadRootError,
    ExcludedJError,
    HypothesisError,
    InvariantError,
    PreconditionError,
    ResourceLimitError,
    SingularCurveError,
)

PRIMES_TO_31 = list(primerange(5, 32))
PRIMES_TO_37 = list(primerange(5, 38))


def _brute_force_count(E):
    """1 + #{(x, y) in F_q^2 on the affine curve}."""
    F = E.field
    if isinstance(F, QuadExtField):
        elements = [F(a0, a1) for a0, a1 in product(range(F.p), repeat=2)]
    else:
        elements = [F(a) for a in range(F.p)]
    count = 1
    for x in elements:
        rhs = x**3 + E.a2 * x * x + E.a4 * x + E.a6
        for y in elements:
            if y * y + E.a1 * x * y + E.a3 * y == rhs:
                count += 1
    return count


def _random_curves(F, n, rng, general=False):
    curves = []
    while len(curves) < n:
        coeffs = [int(c) for c in rng.integers(0, F.p, size=5)]
        if not general:
            coeffs[:3] = [0, 0, 0]
        try:
            curves.append(WeierstrassCurve(*coeffs, field=F))
        except SingularCurveError:
            continue
    return curves


@pytest.mark.parametrize("p", PRIMES_TO_31)
def test_count_points_prime_field(p):
    """Test vectorized counts against the (x, y) scan, short and general models."""
    rng = np.random.default_rng(p)
    F = PrimeField(p)
    for E in _random_curves(F, 4, rng) + _random_curves(F, 4, rng, general=True):
        got = count_points(E).count
        assert got == _brute_force_count(E), f"count mismatch for {E} over F_{p}"


@pytest.mark.parametrize("p", [5, 7])
def test_count_points_quadratic_field(p):
    """Test counts over F_{p^2}, including curves with coefficients outside F_p."""
    rng = np.random.default_rng(p)
    K = QuadExtField(p)
    curves = []
    while len(curves) < 3:
        A = K(*[int(c) for c in rng.integers(0, p, size=2)])
        B = K(*[int(c) for c in rng.integers(0, p, size=2)])
        try:
            curves.append(WeierstrassCurve.short(A, B, field=K))
        except SingularCurveError:
            continue
    curves.append(WeierstrassCurve.general(1, 0, 0, 0, K(1, 1), field=K))
    for E in curves:
        assert count_points(E).count == _brute_force_count(E), f"count mismatch for {E}"


def test_count_points_bound():
    """Fields larger than the bound are refused."""
    E = WeierstrassCurve.short(1, 1, field=QuadExtField(11))
    with pytest.raises(ResourceLimitError):
        count_points(E, bound=100)


def test_trace_record_checks():
    """Inconsistent or out-of-Hasse traces are invariant violations."""
    with pytest.raises(InvariantError):
        TraceRecord(5, 6, 1)
    with pytest.raises(InvariantError):
        TraceRecord(5, 0, 6)


def test_singular_and_form():
    """Zero discriminant and malformed short models are refused."""
    with pytest.raises(SingularCurveError):
        WeierstrassCurve.short(0, 0)
    with pytest.raises(SingularCurveError):
        WeierstrassCurve.short(-3, 2)  # x^3 - 3x + 2 = (x - 1)^2 (x + 2)
    with pytest.raises(PreconditionError):
        WeierstrassCurve(1, 0, 0, 1, 1, form="short")


def test_build_E0_anchor():
    """E0 for j0 = 2 reduces mod 5 to y^2 = x^3 + x + 4 with a_5 = -3."""
    E0 = build_E0(2)
    assert E0.j_invariant() == 2
    reduced = E0.reduce(5)
    assert (reduced.A, reduced.B) == (1, 4)
    assert frobenius_trace(E0, 5) == -3


@pytest.mark.parametrize("j0", [Fraction(2), Fraction(-3375), Fraction(7, 2), Fraction(1729)])
def test_build_E0(j0):
    """j(E0) = j0 and disc(E0) = j0^8 / (j0 - 1728)^9."""
    E0 = build_E0(j0)
    assert E0.j_invariant() == j0
    assert E0.discriminant == j0**8 / (j0 - 1728) ** 9


@pytest.mark.parametrize("j0", [0, 1728])
def test_excluded_j(j0):
    """j0 in {0, 1728} is excluded."""
    with pytest.raises(ExcludedJError):
        build_E0(j0)
    with pytest.raises(ExcludedJError):
        z0_of(j0)


def test_hypotheses():
    """Test the hypothesis check and its reasons."""
    assert check_hypotheses(2, 5) == z0_of(2)
    with pytest.raises(HypothesisError) as info:
        check_hypotheses(3, 5)
    assert "1728" in info.value.reason
    with pytest.raises(HypothesisError):
        check_hypotheses(Fraction(7, 5), 5)


def test_reduction():
    """Good and bad reduction of E0."""
    E0 = build_E0(2)
    assert E0.has_good_reduction(5)
    assert not build_E0(3).has_good_reduction(5)
    with pytest.raises(PreconditionError):
        build_E0(3).reduce(5)


@pytest.mark.parametrize("p", [7, 11, 13])
def test_e1_models(p):
    """E1 has disc 1/j0; its square-completed model has a2 = 1/4; E1' is y^2 = x^3 - x/48 + s/864."""
    for j0 in range(1, p):
        try:
            z0 = check_hypotheses(j0, p)
        except HypothesisError:
            continue
        _, field, roots = quadratic_layer(z0, p)
        for s in roots:
            E1, squared, short = e1_model_chain(z0, s, field)
            assert E1.discriminant == field(j0).inverse()
            assert squared.a2 == Fraction(1, 4)
            assert short.A == Fraction(-1, 48)
            assert short.B == s / 864
            assert build_E1_reduced(z0, s, field).j_invariant() == j0


def test_bad_root():
    """A value that does not square to z0 is refused."""
    z0 = z0_of(2)
    K = QuadExtField(5)
    with pytest.raises(BadRootError):
        build_E1_general(z0, K(1), K)


def test_twist_gamma_rational():
    """The quadratic twist by d has gamma = d."""
    E0 = build_E0(Fraction(7, 2))
    for d in (-1, 2, 3, Fraction(5, 7)):
        assert twist_gamma(E0, E0.quadratic_twist(d)) == d
    with pytest.raises(PreconditionError):
        twist_gamma(E0, build_E0(2))


@pytest.mark.parametrize("p", PRIMES_TO_37)
def test_check_twist_gamma(p):
    """gamma(E0, E1') = z0 sqrt(z0) for every admissible j0 and both roots."""
    for j0 in range(1, p):
        try:
            check_hypotheses(j0, p)
        except HypothesisError:
            continue
        report = check_twist_gamma(j0, p)
        assert report.passed, f"fails at p={p}, j0={j0}"


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("d", [-1, 2, 3])
def test_check_squares_equal(p, d):
    """Twists share a_p^2, and a_p of the twist carries the symbol (d/p)."""
    for j0 in range(1, p):
        if (j0 - 1728) % p == 0:
            continue
        E0 = build_E0(j0)
        report = check_squares_equal(E0, E0.quadratic_twist(d), p)
        assert report.passed
        assert report.detail["twist_relation"]


@pytest.mark.parametrize("p", PRIMES_TO_37)
def test_cor_3_2_and_prop_3_4(p):
    """Trace transfer to E1 and a_P(E1) as a truncated 2F1, in both branches."""
    branches = set()
    for j0 in range(1, p):
        report = check_cor_3_2(j0, p)
        if (j0 - 1728) % p == 0:
            assert report.verdict == "skip" and report.skip_reason
            continue
        z0 = z0_of(j0)
        branches.add(branch_of(z0, p))
        assert report.passed, f"trace transfer fails at p={p}, j0={j0}"
        series = check_prop_3_4(z0, p)
        assert series.passed, f"series fails at p={p}, j0={j0}"
    if p > 7:
        assert branches == {"split", "inert"}


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_root_square_criterion(p):
    """sqrt(z0) is a square in F_{p^2} iff p = 3 mod 4, for inert z0."""
    for j0 in range(1, p):
        if (j0 - 1728) % p == 0:
            continue
        z0 = z0_of(j0)
        if legendre_symbol(z0, p) == 1:
            with pytest.raises(PreconditionError):
                check_root_square_criterion(z0, p)
        else:
            assert check_root_square_criterion(z0, p).passed


def _short_count_oracle(p):
    """(A, B) -> 1 + #{(x, y) : y^2 = x^3 + Ax + B} over F_p, from a table of square counts."""
    roots = [0] * p
    for y in range(p):
        roots[y * y % p] += 1
    cubes = [(x**3 % p, x) for x in range(p)]
    return lambda A, B: 1 + sum(roots[(c + A * x + B) % p] for c, x in cubes)


@pytest.mark.parametrize("p", PRIMES_TO_31)
def test_count_points_every_short_curve(p):
    """Every nonsingular y^2 = x^3 + Ax + B over F_p against the (x, y) scan."""
    F = PrimeField(p)
    oracle = _short_count_oracle(p)
    checked = 0
    for A, B in product(range(p), repeat=2):
        if (4 * A**3 + 27 * B * B) % p == 0:
            with pytest.raises(SingularCurveError):
                WeierstrassCurve.short(A, B, field=F)
            continue
        record = count_points(WeierstrassCurve.short(A, B, field=F))
        assert record.count == oracle(A, B), f"count mismatch for ({A}, {B}) over F_{p}"
        checked += 1
    assert checked == p * p - p


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_trace_over_quadratic_field(p):
    """a over F_{p^2} is a_p^2 - 2p for the reduction of E0."""
    K = QuadExtField(p)
    admissible = 0
    for j0 in range(1, p):
        try:
            check_hypotheses(j0, p)
        except HypothesisError:
            continue
        E0 = build_E0(j0)
        a = frobenius_trace(E0, p)
        assert count_points(E0.reduce(K)).a == a * a - 2 * p, f"fails at p={p}, j0={j0}"
        admissible += 1
    assert admissible > 0


def test_squares_equal_random_general_curves():
    """a_p^2 agrees between 50 random general curves and their twists, p <= 97."""
    rng = np.random.default_rng(2024)
    primes = list(primerange(5, 98))
    cases = 0
    while cases < 50:
        coeffs = [int(c) for c in rng.integers(-5, 6, size=5)]
        d = int(rng.choice([-7, -3, -2, -1, 2, 3, 5, 6, 7]))
        p = int(rng.choice(primes))
        try:
            E = WeierstrassCurve.general(*coeffs)
        except SingularCurveError:
            continue
        if E.j_invariant() in (0, 1728) or d % p == 0:
            continue
        twist = E.quadratic_twist(d)
        if not (E.has_good_reduction(p) and twist.has_good_reduction(p)):
            continue
        report = check_squares_equal(E, twist, p)
        assert report.passed, f"fails for {E}, d={d}, p={p}"
        if "twist_relation" in report.detail:
            assert report.detail["twist_relation"], f"sign fails for {E}, d={d}, p={p}"
        cases += 1


def test_build_E0_random_j():
    """j(E0) = j0 and disc(E0) (j0 - 1728)^9 = j0^8 for 100 random rational j0."""
    rng = np.random.default_rng(7)
    seen = 0
    while seen < 100:
        j0 = Fraction(int(rng.integers(-10**6, 10**6)), int(rng.integers(1, 1000)))
        if j0 in (0, 1728):
            continue
        E0 = build_E0(j0)
        assert E0.j_invariant() == j0
        assert E0.discriminant * (j0 - 1728) ** 9 == j0**8
        seen += 1
