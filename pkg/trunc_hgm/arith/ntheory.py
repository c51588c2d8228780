"""Elementary number theory on Python integers and rationals.

Rationals are ``fractions.Fraction``. Every function here works on plain
integers; the field wrappers in :mod:`trunc_hgm.arith.fields` build on them.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Tuple, Union

from sympy import isprime, primerange

from trunc_hgm.errors import InvalidModulusError, PreconditionError, UndefinedValuationError

Rational = Fraction
RationalLike = Union[int, str, Fraction]


def as_rational(x: RationalLike) -> Fraction:
    """Parse an int, a Fraction or a string such as ``"-5/3"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"Cannot read {x!r} as a rational number.") from exc
    raise TypeError(f"Cannot convert {type(x).__name__} to a rational number.")


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def primes_between(lo: int, hi: int) -> Iterator[int]:
    """Primes p with lo <= p <= hi, ascending."""
    return (int(p) for p in primerange(lo, hi + 1))


@lru_cache(maxsize=None)
def check_modulus(p: int) -> int:
    """Return p if it is a prime not dividing 6, raise otherwise."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise InvalidModulusError(f"Modulus must be an integer, got {p!r}.")
    if not is_prime(p):
        raise InvalidModulusError(f"{p} is not a prime.")
    if p in (2, 3):
        raise InvalidModulusError(f"Modulus {p} divides 6.")
    return p


def split_valuation(n: int, p: int) -> Tuple[int, int]:
    """Write the nonzero integer n as p**v * u with p not dividing u."""
    if n == 0:
        raise UndefinedValuationError("The valuation of 0 is undefined.")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def int_valuation(n: int, p: int) -> int:
    """Exponent of p in the nonzero integer n."""
    return split_valuation(n, p)[0]


def rational_p_valuation(x: RationalLike, p: int) -> int:
    """v_p(numerator) - v_p(denominator)."""
    x = as_rational(x)
    if x == 0:
        raise UndefinedValuationError("The valuation of 0 is undefined.")
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def rational_mod(x: RationalLike, m: int, p: int) -> int:
    """Residue of x modulo m = p**k, for x with nonnegative p-adic valuation."""
    x = as_rational(x)
    if x.denominator % p == 0:
        raise PreconditionError(f"{x} is not {p}-integral.")
    return x.numerator * pow(x.denominator, -1, m) % m


def euler_criterion(a: int, p: int) -> int:
    """a**((p-1)/2) mod p, lifted to {-1, 0, 1}."""
    ls = pow(a % p, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def legendre_symbol(a: RationalLike, p: int) -> int:
    """The symbol (a/p): 1 for a nonzero square, -1 for a non-square, 0 for zero mod p."""
    check_modulus(p)
    a = as_rational(a)
    if a != 0 and rational_p_valuation(a, p) < 0:
        raise PreconditionError(f"({a}/{p}) needs v_{p}({a}) >= 0.")
    return euler_criterion(rational_mod(a, p, p), p)


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    n = 2
    while euler_criterion(n, p) != -1:
        n += 1
    return n


def tonelli_shanks(a: int, p: int) -> Optional[int]:
    """A square root of a modulo the odd prime p, or None for a non-residue."""
    a %= p
    if a == 0:
        return 0
    if euler_criterion(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)

    # p - 1 = q * 2**s with q odd
    q, s = p - 1, 0
    while q & 1 == 0:
        q >>= 1
        s += 1

    c = pow(smallest_nonresidue(p), q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        # lowest i with t**(2**i) == 1
        i, t2i = 0, t
        while t2i != 1:
            t2i = t2i * t2i % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return x


def canonical_sqrt(a: int, p: int) -> Optional[int]:
    """The square root of a mod p lying in [0, (p-1)/2], or None."""
    r = tonelli_shanks(a, p)
    if r is None:
        return None
    return min(r, (p - r) % p)
