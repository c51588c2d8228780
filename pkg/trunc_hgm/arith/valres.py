"""p-adic numbers known to finite precision, written p^v * u with u a unit mod p^k.

Factorial and Pochhammer ratios in the hypergeometric coefficients carry
powers of p in numerator and denominator; keeping the valuation apart from the
unit residue lets them cancel exactly before anything is reduced mod p.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from trunc_hgm.arith.ntheory import (
    as_rational,
    check_modulus,
    rational_mod,
    split_valuation,
)
from trunc_hgm.errors import IntegralityError, PrecisionError

__all__ = ["ValuatedResidue", "factorial_valres", "legendre_factorial_valuation"]

# valuation of a zero known exactly; only ever compared, never used as an exponent
EXACT_ZERO = 1 << 62


@dataclass(frozen=True)
class ValuatedResidue:
    """The value p**valuation * unit, with unit known modulo p**precision.

    A zero ``unit`` is the "zero at precision" state: the value is only known
    to be divisible by p**valuation. ``EXACT_ZERO`` marks a true zero.
    """

    p: int
    precision: int
    valuation: int
    unit: int

    def __post_init__(self):
        if self.precision < 1:
            raise PrecisionError(f"Precision must be positive, got {self.precision}.")
        if self.unit % self.p == 0 and self.unit != 0:
            raise IntegralityError(f"Unit {self.unit} is divisible by {self.p}.")
        object.__setattr__(self, "unit", self.unit % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    @classmethod
    def from_int(cls, n: int, p: int, k: int = 1) -> "ValuatedResidue":
        if n == 0:
            return cls.zero(p, k)
        v, u = split_valuation(n, p)
        return cls(p, k, v, u % p**k)

    @classmethod
    def from_rational(
        cls, x: Union[int, str, Fraction], p: int, k: int = 1
    ) -> "ValuatedResidue":
        x = as_rational(x)
        if x == 0:
            return cls.zero(p, k)
        vn, un = split_valuation(x.numerator, p)
        vd, ud = split_valuation(x.denominator, p)
        return cls(p, k, vn - vd, rational_mod(Fraction(un, ud), p**k, p))

    @classmethod
    def one(cls, p: int, k: int = 1) -> "ValuatedResidue":
        return cls(p, k, 0, 1)

    @classmethod
    def zero(cls, p: int, k: int = 1, valuation: int = EXACT_ZERO) -> "ValuatedResidue":
        return cls(p, k, valuation, 0)

    def is_zero(self) -> bool:
        return self.unit == 0

    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.valuation >= EXACT_ZERO

    @property
    def absolute_precision(self) -> int:
        """Exponent e such that the value is known modulo p**e."""
        if self.is_zero():
            return self.valuation
        return self.valuation + self.precision

    def _check(self, other: "ValuatedResidue") -> None:
        if other.p != self.p:
            raise ValueError(f"Cannot combine {self.p}-adic and {other.p}-adic values.")

    def _lift(self, other) -> "ValuatedResidue":
        if isinstance(other, ValuatedResidue):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ValuatedResidue.from_rational(other, self.p, self.precision)
        return NotImplemented

    def __mul__(self, other) -> "ValuatedResidue":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            # zeros absorb: the product is divisible by p**(va + vb)
            if self.is_exact_zero() or other.is_exact_zero():
                return ValuatedResidue.zero(self.p, min(self.precision, other.precision))
            v = min(self.valuation + other.valuation, EXACT_ZERO)
            return ValuatedResidue.zero(self.p, min(self.precision, other.precision), v)
        k = min(self.precision, other.precision)
        return ValuatedResidue(
            self.p,
            k,
            self.valuation + other.valuation,
            self.unit * other.unit % self.p**k,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ValuatedResidue":
        if self.is_zero():
            raise ZeroDivisionError("Cannot invert a valuated zero.")
        return ValuatedResidue(
            self.p, self.precision, -self.valuation, pow(self.unit, -1, self.modulus)
        )

    def __truediv__(self, other) -> "ValuatedResidue":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            if other.is_zero():
                raise ZeroDivisionError("Cannot divide by a valuated zero.")
            return ValuatedResidue.zero(
                self.p, self.precision, self.valuation - other.valuation
            )
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ValuatedResidue":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, e: int) -> "ValuatedResidue":
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero():
            if e == 0:
                return ValuatedResidue.one(self.p, self.precision)
            return ValuatedResidue.zero(
                self.p, self.precision, min(self.valuation * e, EXACT_ZERO)
            )
        return ValuatedResidue(
            self.p, self.precision, self.valuation * e, pow(self.unit, e, self.modulus)
        )

    def __neg__(self) -> "ValuatedResidue":
        return ValuatedResidue(self.p, self.precision, self.valuation, -self.unit)

    def __add__(self, other) -> "ValuatedResidue":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        bound = min(self.absolute_precision, other.absolute_precision)
        if self.is_zero() and other.is_zero():
            return ValuatedResidue.zero(self.p, min(self.precision, other.precision), bound)
        if self.is_zero() or other.is_zero():
            x = other if self.is_zero() else self
            if x.valuation >= bound:
                return ValuatedResidue.zero(self.p, x.precision, bound)
            k = bound - x.valuation
            return ValuatedResidue(self.p, k, x.valuation, x.unit % self.p**k)

        lo, hi = (self, other) if self.valuation <= other.valuation else (other, self)
        rel = bound - lo.valuation
        m = self.p**rel
        total = (lo.unit + hi.unit * pow(self.p, hi.valuation - lo.valuation, m)) % m
        if total == 0:
            return ValuatedResidue.zero(self.p, min(self.precision, other.precision), bound)
        shift, unit = split_valuation(total, self.p)
        return ValuatedResidue(self.p, rel - shift, lo.valuation + shift, unit)

    __radd__ = __add__

    def __sub__(self, other) -> "ValuatedResidue":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "ValuatedResidue":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def residue(self, j: int = 1) -> int:
        """The value modulo p**j."""
        if self.is_zero():
            if self.valuation >= j:
                return 0
            raise PrecisionError(
                f"Value only known mod {self.p}^{self.valuation}, asked for mod {self.p}^{j}."
            )
        if self.valuation < 0:
            raise IntegralityError(
                f"Value has {self.p}-adic valuation {self.valuation} < 0."
            )
        if self.valuation >= j:
            return 0
        if self.absolute_precision < j:
            raise PrecisionError(
                f"Value only known mod {self.p}^{self.absolute_precision}, asked for mod {self.p}^{j}."
            )
        m = self.p**j
        return self.p**self.valuation * self.unit % m

    def congruent(self, other: "ValuatedResidue", j: int = 1) -> bool:
        """Whether both values agree modulo p**j."""
        return self.residue(j) == other.residue(j)

    def __str__(self):
        if self.is_exact_zero():
            return "0"
        if self.is_zero():
            return f"O({self.p}^{self.valuation})"
        return f"{self.p}^{self.valuation}*{self.unit} (mod {self.p}^{self.absolute_precision})"


def legendre_factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) = sum of floor(n / p**s) over s >= 1."""
    v, q = 0, n // p
    while q:
        v += q
        q //= p
    return v


class _FactorialUnits:
    """Growing table of unit(n!) mod p**k, one per (p, k), shared between threads."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.m = p**k
        self.table: List[int] = [1]
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> int:
        if n >= len(self.table):
            with self._lock:
                table, p, m = self.table, self.p, self.m
                acc = table[-1]
                for i in range(len(table), n + 1):
                    while i % p == 0:
                        i //= p
                    acc = acc * i % m
                    table.append(acc)
        return self.table[n]


_tables: Dict[Tuple[int, int], _FactorialUnits] = {}
_tables_lock = threading.Lock()


def _units(p: int, k: int) -> _FactorialUnits:
    key = (p, k)
    table = _tables.get(key)
    if table is None:
        with _tables_lock:
            table = _tables.setdefault(key, _FactorialUnits(p, k))
    return table


def factorial_valres(n: int, p: int, k: int = 1) -> ValuatedResidue:
    """n! as (v_p(n!), n!/p^v mod p^k)."""
    if n < 0:
        raise ValueError(f"Factorial of a negative integer {n}.")
    check_modulus(p)
    return ValuatedResidue(p, k, legendre_factorial_valuation(n, p), _units(p, k)[n])
