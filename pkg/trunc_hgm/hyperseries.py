"""Truncated hypergeometric sums and their congruences modulo p.

Only the two data ``(1/6, 5/6; 1)`` and ``(1/2, 1/6, 5/6; 1, 1)`` are used.
Coefficients are accumulated as valuation plus unit residue, so a factor of p
in a Pochhammer numerator cancels against the same factor in r! before any
reduction happens.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from trunc_hgm.arith.fields import FieldElement, PrimeField, QuadExtField
from trunc_hgm.arith.ntheory import (
    as_rational,
    check_modulus,
    legendre_symbol,
    rational_mod,
    rational_p_valuation,
    split_valuation,
)
from trunc_hgm.arith.poly import DensePolynomial
from trunc_hgm.arith.valres import ValuatedResidue, factorial_valres
from trunc_hgm.errors import (
    IntegralityError,
    InvariantError,
    PreconditionError,
    ResourceLimitError,
)
from trunc_hgm.reports import CongruenceReport

logger = logging.getLogger(__name__)

# polynomial degree above which the factorization check refuses to run
DEFAULT_DEGREE_CAP = 100_000


@dataclass(frozen=True)
class HypergeometricDatum:
    """Parameters (alpha; beta) of a pFq series with p = len(alpha)."""

    alpha: Tuple[Fraction, ...]
    beta: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(as_rational(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(as_rational(b) for b in self.beta))
        if len(self.beta) != len(self.alpha) - 1:
            raise PreconditionError(
                f"Need one beta fewer than alpha, got {len(self.alpha)} and {len(self.beta)}."
            )
        for b in self.beta:
            if b.denominator == 1 and b <= 0:
                raise PreconditionError(f"beta entry {b} is a nonpositive integer.")

    @property
    def name(self) -> str:
        return f"{len(self.alpha)}F{len(self.beta)}"


TWO_F_ONE = HypergeometricDatum((Fraction(1, 6), Fraction(5, 6)), (Fraction(1),))
THREE_F_TWO = HypergeometricDatum(
    (Fraction(1, 2), Fraction(1, 6), Fraction(5, 6)), (Fraction(1), Fraction(1))
)


@dataclass(frozen=True)
class TruncationLevel:
    """Highest index kept in a truncated sum, with the rule that produced it."""

    r_max: int
    derivation: str = "explicit"

    def __post_init__(self):
        if self.r_max < 0:
            raise PreconditionError(f"Truncation index must be nonnegative, got {self.r_max}.")
        if self.derivation not in _RULES and self.derivation != "explicit":
            raise ValueError(
                f"Truncation {self.derivation} not recognized. Currently supported truncations are: {['explicit'] + list(_RULES)}"
            )

    @classmethod
    def explicit(cls, r_max: int) -> "TruncationLevel":
        return cls(r_max, "explicit")

    @classmethod
    def from_rule(cls, derivation: str, p: int, l: int) -> "TruncationLevel":
        if derivation not in _RULES:
            raise ValueError(
                f"Truncation {derivation} not recognized. Currently supported truncations are: {list(_RULES)}"
            )
        return cls(_RULES[derivation](p, l), derivation)

    @classmethod
    def sixth(cls, p: int, l: int = 1) -> "TruncationLevel":
        return cls.from_rule("floor((p^l-1)/6)", p, l)

    @classmethod
    def full(cls, p: int, l: int = 1) -> "TruncationLevel":
        return cls.from_rule("p^l-1", p, l)

    @classmethod
    def double(cls, p: int, l: int = 1) -> "TruncationLevel":
        return cls.from_rule("p^(2l)-1", p, l)

    def consistent_with(self, p: int, l: int) -> bool:
        if self.derivation == "explicit":
            return True
        return self.r_max == _RULES[self.derivation](p, l)


_RULES = {
    "floor((p^l-1)/6)": lambda p, l: (p**l - 1) // 6,
    "p^l-1": lambda p, l: p**l - 1,
    "p^(2l)-1": lambda p, l: p ** (2 * l) - 1,
}


@dataclass(frozen=True)
class ZpUnitParam:
    """a in Z_p^x together with [a]_0, [-a]_0 and a' = p^-l (a + [-a]_0)."""

    a: Fraction
    p: int
    l: int
    bracket_zero: int
    neg_bracket_zero: int
    a_prime: Fraction


def _as_level(trunc: Union[TruncationLevel, int]) -> TruncationLevel:
    if isinstance(trunc, TruncationLevel):
        return trunc
    return TruncationLevel.explicit(int(trunc))


def _check_level(l: int) -> int:
    if l not in (1, 2):
        raise PreconditionError(f"Residue degree l must be 1 or 2, got {l}.")
    return l


### Pochhammer symbols


def pochhammer_valres(a, m: int, p: int, k: int = 1) -> ValuatedResidue:
    """(a)_m = a(a+1)...(a+m-1) as a valuated residue mod p^k."""
    check_modulus(p)
    a = as_rational(a)
    if m < 0:
        raise PreconditionError(f"Pochhammer length must be nonnegative, got {m}.")
    if a != 0 and rational_p_valuation(a, p) < 0:
        raise PreconditionError(f"(a)_m needs v_{p}(a) >= 0, got a = {a}.")
    mod = p**k
    u, d = a.numerator, a.denominator
    v, unit = 0, 1
    for j in range(m):
        n = u + j * d
        if n == 0:
            return ValuatedResidue.zero(p, k)
        s, w = split_valuation(n, p)
        v += s
        unit = unit * w % mod
    unit = unit * pow(d, -m, mod) % mod
    return ValuatedResidue(p, k, v, unit)


def _ratio_walk(a: Fraction, p: int, k: int) -> Iterator[Tuple[int, int]]:
    """(valuation, unit) of (a)_n / n! for n = 0, 1, 2, ...; None once exactly zero."""
    mod = p**k
    u, d = a.numerator, a.denominator
    d_inv = pow(d, -1, mod)
    v, unit = 0, 1
    n = 0
    while True:
        yield v, unit
        num = u + n * d
        if num == 0:
            break
        s, w = split_valuation(num, p)
        t, x = split_valuation(n + 1, p)
        v += s - t
        unit = unit * w % mod * d_inv % mod * pow(x, -1, mod) % mod
        n += 1
    while True:
        yield None


def pochhammer_ratio_stream(a, p: int, k: int = 1) -> Iterator[ValuatedResidue]:
    """(a)_n / n! for n = 0, 1, 2, ... as valuated residues."""
    check_modulus(p)
    a = as_rational(a)
    if a != 0 and rational_p_valuation(a, p) < 0:
        raise PreconditionError(f"(a)_n needs v_{p}(a) >= 0, got a = {a}.")
    for item in _ratio_walk(a, p, k):
        if item is None:
            yield ValuatedResidue.zero(p, k)
        else:
            yield ValuatedResidue(p, k, item[0], item[1])


def _residue(v: int, unit: int, p: int, k: int) -> int:
    if v < 0:
        raise IntegralityError(f"Coefficient has {p}-adic valuation {v} < 0.")
    if v >= k:
        return 0
    return p**v * unit % p**k


### Coefficients


@lru_cache(maxsize=128)
def _coefficient_table(
    datum: HypergeometricDatum, p: int, r_max: int, k: int
) -> Tuple[np.ndarray, np.ndarray]:
    check_modulus(p)
    for a in datum.alpha + datum.beta:
        if a != 0 and rational_p_valuation(a, p) < 0:
            raise PreconditionError(f"Parameter {a} is not {p}-integral.")
    mod = p**k
    nums = [(a.numerator, a.denominator) for a in datum.alpha]
    dens = [(b.numerator, b.denominator) for b in datum.beta]
    # ratio of the denominators' contributions, constant per step
    scale = 1
    for _, d in nums:
        scale = scale * pow(d, -1, mod) % mod
    for _, d in dens:
        scale = scale * d % mod

    vals = np.zeros(r_max + 1, dtype=np.int64)
    res = np.zeros(r_max + 1, dtype=np.int64 if mod * mod < (1 << 62) else object)
    v, unit = 0, 1
    for r in range(r_max + 1):
        vals[r] = v
        res[r] = _residue(v, unit, p, k)
        if r == r_max:
            break
        top, bottom = 1, 1
        step_v = 0
        exact_zero = False
        for u, d in nums:
            n = u + r * d
            if n == 0:
                exact_zero = True
                break
            s, w = split_valuation(n, p)
            step_v += s
            top = top * w % mod
        if exact_zero:
            vals[r + 1 :] = np.iinfo(np.int64).max
            break
        for u, d in dens:
            s, w = split_valuation(u + r * d, p)
            step_v -= s
            bottom = bottom * w % mod
        s, w = split_valuation(r + 1, p)
        step_v -= s
        bottom = bottom * w % mod
        v += step_v
        unit = unit * top % mod * scale % mod * pow(bottom, -1, mod) % mod
    vals.setflags(write=False)
    res.setflags(write=False)
    return vals, res


def coefficient_residues(
    datum: HypergeometricDatum, p: int, r_max: int, power: int = 1
) -> np.ndarray:
    """c_r mod p^power for 0 <= r <= r_max, read-only."""
    return _coefficient_table(datum, p, r_max, power)[1]


def coefficient_valuations(datum: HypergeometricDatum, p: int, r_max: int) -> np.ndarray:
    """v_p(c_r) for 0 <= r <= r_max; an exactly vanishing coefficient gets int64 max."""
    return _coefficient_table(datum, p, r_max, 1)[0]


def coefficient_valres(
    datum: HypergeometricDatum, r: int, p: int, k: int = 1
) -> ValuatedResidue:
    """c_r = prod (alpha_i)_r / (prod (beta_j)_r * r!) by Pochhammer products."""
    c = ValuatedResidue.one(p, k)
    for a in datum.alpha:
        c = c * pochhammer_valres(a, r, p, k)
    for b in datum.beta:
        c = c / pochhammer_valres(b, r, p, k)
    return c / factorial_valres(r, p, k)


def closed_form_coefficient(
    datum: HypergeometricDatum, r: int, p: int, k: int = 1
) -> ValuatedResidue:
    """c_r through the (6r)! closed forms of the two fixed data."""
    f = lambda n: factorial_valres(n, p, k)  # noqa: E731
    if datum == TWO_F_ONE:
        return ValuatedResidue.from_int(432, p, k) ** (-r) * f(6 * r) / (
            f(r) * f(2 * r) * f(3 * r)
        )
    if datum == THREE_F_TWO:
        return ValuatedResidue.from_int(1728, p, k) ** (-r) * f(6 * r) / (
            f(3 * r) * f(r) ** 3
        )
    raise PreconditionError(f"No closed form for the datum {datum}.")


def _same_valres(x: ValuatedResidue, y: ValuatedResidue) -> bool:
    if x.is_zero() or y.is_zero():
        return x.is_zero() and y.is_zero()
    return (x.valuation, x.unit) == (y.valuation, y.unit)


def closed_form_term_identity_check(r: int, p: int, k: int = 1) -> bool:
    """Both fixed data: Pochhammer and closed-form coefficients agree at precision k."""
    return all(
        _same_valres(coefficient_valres(d, r, p, k), closed_form_coefficient(d, r, p, k))
        for d in (TWO_F_ONE, THREE_F_TWO)
    )


def closed_form_numerator(datum: HypergeometricDatum, r: int) -> int:
    """The integer (6r)!/(r!(2r)!(3r)!) or (6r)!/((3r)!(r!)^3)."""
    if datum == TWO_F_ONE:
        return math.factorial(6 * r) // (
            math.factorial(r) * math.factorial(2 * r) * math.factorial(3 * r)
        )
    if datum == THREE_F_TWO:
        return math.factorial(6 * r) // (math.factorial(3 * r) * math.factorial(r) ** 3)
    raise PreconditionError(f"No closed form for the datum {datum}.")


### Truncated sums


def truncated_series_poly(
    datum: HypergeometricDatum,
    trunc: Union[TruncationLevel, int],
    field: Union[PrimeField, QuadExtField, int],
) -> DensePolynomial:
    """sum_{r <= r_max} (c_r mod p) t^r over F_p."""
    p = field if isinstance(field, int) else field.characteristic
    level = _as_level(trunc)
    return DensePolynomial(coefficient_residues(datum, p, level.r_max), p)


def truncated_sum_value(
    datum: HypergeometricDatum,
    z,
    trunc: Union[TruncationLevel, int],
    p: Optional[int] = None,
    l: Optional[int] = None,
) -> FieldElement:
    """The truncated sum evaluated at z in F_p or F_{p^2}."""
    if p is None:
        p = z.modulus
    level = _as_level(trunc)
    if l is not None and not level.consistent_with(p, l):
        raise PreconditionError(f"Truncation {level} does not match p = {p}, l = {l}.")
    return truncated_series_poly(datum, level, p).evaluate(z)


### Checks


def check_term_vanishing(p: int, l: int = 1) -> CongruenceReport:
    """Coefficients with (p^l - 1)/6 < r <= p^l - 1 are divisible by p, for both data."""
    check_modulus(p)
    _check_level(l)
    q = p**l
    lo = (q - 1) // 6 + 1
    expected, observed, first_bad = [], [], {}
    for datum in (TWO_F_ONE, THREE_F_TWO):
        vals = coefficient_valuations(datum, p, q - 1)[lo:]
        expected.append(len(vals))
        observed.append(int(np.count_nonzero(vals >= 1)))
        bad = np.flatnonzero(vals < 1)
        if bad.size:
            first_bad[datum.name] = int(bad[0]) + lo
    return CongruenceReport.compare(
        "4.vanish",
        p,
        observed,
        expected,
        l=l,
        detail={"range": f"({(q - 1) // 6}, {q - 1}]", "first_nonvanishing": first_bad},
    )


def check_closed_forms(p: int, r_max: int, k: int = 1) -> CongruenceReport:
    """closed_form_term_identity_check for every r <= r_max."""
    check_modulus(p)
    failing = [r for r in range(r_max + 1) if not closed_form_term_identity_check(r, p, k)]
    return CongruenceReport.compare(
        "4.terms",
        p,
        failing,
        [],
        detail={"r_max": r_max, "precision": k},
    )


def check_truncated_clausen(p: int, l: int = 1) -> CongruenceReport:
    """2F1(t)^2 against 3F2(4t(1-t)), both truncated at floor((p^l-1)/6), mod p."""
    check_modulus(p)
    _check_level(l)
    level = TruncationLevel.sixth(p, l)
    left = truncated_series_poly(TWO_F_ONE, level, p) ** 2
    inner = DensePolynomial([0, 4, -4], p)
    right = truncated_series_poly(THREE_F_TWO, level, p).compose(inner)
    return CongruenceReport.compare(
        "4.3",
        p,
        left,
        right,
        l=l,
        detail={"truncation": level.r_max, "first_difference": left.first_difference(right)},
    )


def compute_bracket_and_prime(a, p: int, l: int = 1) -> ZpUnitParam:
    """[a]_0, [-a]_0 and a' with respect to p^l."""
    check_modulus(p)
    a = as_rational(a)
    if a == 0 or rational_p_valuation(a, p) != 0:
        raise PreconditionError(f"{a} is not a {p}-adic unit.")
    q = p**l
    bracket = rational_mod(a, q, p)
    neg = rational_mod(-a, q, p)
    a_prime = (a + neg) / q
    if a_prime != 0 and rational_p_valuation(a_prime, p) < 0:
        raise InvariantError(f"a' = {a_prime} is not {p}-integral.")
    return ZpUnitParam(a, p, l, bracket, neg, a_prime)


def check_lemma_5_1(
    a, p: int, l: int = 1, m_max: Optional[int] = 200
) -> CongruenceReport:
    """(a)_{m p^l} / (m p^l)! against (a')_m / m! mod p, for m up to p^l - 1.

    For l = 2 the range stops at ``m_max``.
    """
    _check_level(l)
    param = compute_bracket_and_prime(a, p, l)
    q = p**l
    top = q - 1 if (l == 1 or m_max is None) else min(q - 1, m_max)

    lhs: List[int] = []
    walk = _ratio_walk(param.a, p, 1)
    for n, item in enumerate(walk):
        if n % q == 0:
            lhs.append(0 if item is None else _residue(item[0], item[1], p, 1))
            if len(lhs) > top:
                break
    rhs: List[int] = []
    for item in _ratio_walk(param.a_prime, p, 1):
        rhs.append(0 if item is None else _residue(item[0], item[1], p, 1))
        if len(rhs) > top:
            break
    logger.debug("5.1 a=%s p=%s l=%s: compared m <= %s", param.a, p, l, top)
    return CongruenceReport.compare(
        "5.1",
        p,
        lhs,
        rhs,
        l=l,
        detail={
            "a": str(param.a),
            "a_prime": str(param.a_prime),
            "[-a]_0": param.neg_bracket_zero,
            "m_max": top,
        },
    )


def check_p2_factorization(
    p: int, l: int = 1, degree_cap: Optional[int] = DEFAULT_DEGREE_CAP
) -> CongruenceReport:
    """2F1(t)_{p^2l - 1} against 2F1(t)_{p^l - 1} * 2F1(t^{p^l})_{p^l - 1}, mod p."""
    check_modulus(p)
    _check_level(l)
    q = p**l
    if degree_cap is not None and q * q - 1 > degree_cap:
        raise ResourceLimitError(
            f"Degree {q * q - 1} exceeds the polynomial degree cap {degree_cap}."
        )
    left = truncated_series_poly(TWO_F_ONE, TruncationLevel.double(p, l), p)
    short = left.truncate(TruncationLevel.full(p, l).r_max)
    right = short * short.substitute_power(q)
    return CongruenceReport.compare(
        "5.2",
        p,
        left,
        right,
        l=l,
        detail={"degree": q * q - 1, "first_difference": left.first_difference(right)},
    )


def check_reflection(p: int, l: int = 1) -> CongruenceReport:
    """2F1(t) against (-1)^((p^l-1)/2) 2F1(1-t), truncated at floor((p^l-1)/6), mod p."""
    check_modulus(p)
    _check_level(l)
    q = p**l
    level = TruncationLevel.sixth(p, l)
    poly = truncated_series_poly(TWO_F_ONE, level, p)
    sign = -1 if ((q - 1) // 2) % 2 else 1
    reflected = poly.compose(DensePolynomial([1, -1], p)).scale(sign)
    return CongruenceReport.compare(
        "5.3",
        p,
        poly,
        reflected,
        l=l,
        detail={
            "truncation": level.r_max,
            "sign": sign,
            "first_difference": poly.first_difference(reflected),
        },
    )


def check_binomial_reduction(p: int, l: int = 1) -> CongruenceReport:
    """(-1)^r (a)_r / r! against binom([-a]_0, r) for a in {1/6, 5/6}, plus the bracket facts.

    Only p-integrality of a is needed, so 5/6 at p = 5 is covered with [-5/6]_0 = 0
    (20 at l = 2). Also compares the truncated 2F1 with sum binom(A, r) binom(B, r) t^r,
    A = [-1/6]_0 and B = [-5/6]_0.
    """
    check_modulus(p)
    _check_level(l)
    q = p**l
    lhs, rhs = [], []
    brackets = []
    for a in (Fraction(1, 6), Fraction(5, 6)):
        b = rational_mod(-a, q, p)
        brackets.append(b)
        signed = []
        for r, item in zip(range(b + 1), _ratio_walk(a, p, 1)):
            value = 0 if item is None else _residue(item[0], item[1], p, 1)
            signed.append((-value if r % 2 else value) % p)
        lhs.append(signed)
        rhs.append([math.comb(b, r) % p for r in range(b + 1)])
    A, B = brackets
    lhs += [A + B, min(A, B)]
    rhs += [q - 1, (q - 1) // 6]

    level = TruncationLevel.sixth(p, l)
    series = truncated_series_poly(TWO_F_ONE, level, p)
    binomial = DensePolynomial(
        [math.comb(A, r) * math.comb(B, r) for r in range(min(A, B) + 1)], p
    )
    lhs.append(series)
    rhs.append(binomial)
    return CongruenceReport.compare(
        "5.3.binom",
        p,
        lhs,
        rhs,
        l=l,
        detail={"[-1/6]_0": A, "[-5/6]_0": B},
    )


def check_cor_5_4(z0, p: int) -> CongruenceReport:
    """2F1((1 - s)/2)_{p^2-1} against (-1/p) 2F1((1 - s)/2)_{p-1}^2 in F_{p^2}, s^2 = z0.

    Both square roots s are evaluated; lhs and rhs list one value per root.
    """
    check_modulus(p)
    z0 = as_rational(z0)
    if z0 == 0 or rational_p_valuation(z0, p) != 0:
        raise PreconditionError(f"z0 = {z0} must be a {p}-adic unit.")
    if legendre_symbol(z0, p) != -1:
        raise PreconditionError(f"z0 = {z0} is a square mod {p}; this check needs an inert z0.")
    K = QuadExtField(p)
    long_series = truncated_series_poly(TWO_F_ONE, TruncationLevel.double(p, 1), p)
    short_series = long_series.truncate(TruncationLevel.full(p, 1).r_max)
    sign = legendre_symbol(-1, p)

    lhs, rhs, frobenius_ok = [], [], []
    for s in K.sqrt_of_base(z0):
        t = (1 - s) / 2
        lhs.append(long_series.evaluate(t))
        rhs.append(short_series.evaluate(t) ** 2 * sign)
        frobenius_ok.append(t**p == (1 + s) / 2)
    return CongruenceReport.compare(
        "5.4",
        p,
        lhs,
        rhs,
        z0=z0,
        branch="inert",
        detail={"(-1/p)": sign, "frobenius_swaps_roots": all(frobenius_ok)},
    )


def check_factorial_congruence_3_3(p: int, l: int = 1, k: int = 1) -> CongruenceReport:
    """4^{3r} M! / (r! (2r)! (M-3r)!) against (-1)^{3r} (6r)!/(r! (2r)! (3r)!) mod p, M = (p^l-1)/2."""
    check_modulus(p)
    _check_level(l)
    q = p**l
    M = (q - 1) // 2
    f = lambda n: factorial_valres(n, p, k)  # noqa: E731
    four = ValuatedResidue.from_int(4, p, k)
    lhs, rhs = [], []
    for r in range((q - 1) // 6 + 1):
        left = four ** (3 * r) * f(M) / (f(r) * f(2 * r) * f(M - 3 * r))
        right = f(6 * r) / (f(r) * f(2 * r) * f(3 * r))
        if r % 2:
            right = -right
        lhs.append(left.residue(1))
        rhs.append(right.residue(1))
    return CongruenceReport.compare("3.3", p, lhs, rhs, l=l, detail={"M": M})

