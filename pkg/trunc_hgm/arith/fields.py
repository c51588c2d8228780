"""Residue fields F_p and F_{p^2} = F_p[w]/(w^2 - n).

Elements are immutable. Arithmetic accepts Python ints and p-integral
Fractions on either side, so generic formulas such as ``(s - 1) / 864`` work
unchanged for rational and finite-field coefficients.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np

from trunc_hgm.arith.ntheory import (
    canonical_sqrt,
    check_modulus,
    euler_criterion,
    rational_mod,
    smallest_nonresidue,
)
from trunc_hgm.errors import InvalidModulusError, PreconditionError

__all__ = [
    "PrimeField",
    "PrimeFieldElement",
    "QuadExtField",
    "QuadExtElement",
    "FieldElement",
    "find_nonresidue",
    "sqrt_mod_p",
    "field_of",
]


def _power(x, e: int):
    """Square-and-multiply for any element type with ``one`` and ``inverse``."""
    if e < 0:
        return _power(x.inverse(), -e)
    result = x.field.one
    base = x
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


@dataclass(frozen=True, eq=False)
class PrimeFieldElement:
    """An element of F_p, stored as its representative in [0, p)."""

    value: int
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def field(self) -> "PrimeField":
        return PrimeField(self.modulus)

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise InvalidModulusError(
                    f"Cannot mix F_{self.modulus} and F_{other.modulus} elements."
                )
            return other.value
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return other % self.modulus
        if isinstance(other, Fraction):
            return rational_mod(other, self.modulus, self.modulus)
        return NotImplemented

    def _new(self, value: int) -> "PrimeFieldElement":
        return PrimeFieldElement(value, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o - self.value)

    def __neg__(self):
        return self._new(-self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * self._new(o).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return self._new(pow(self.value, e, self.modulus))

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.modulus}.")
        return self._new(pow(self.value, -1, self.modulus))

    def __eq__(self, other):
        if isinstance(other, QuadExtElement):
            return other == self
        try:
            o = self._coerce(other)
        except (InvalidModulusError, PreconditionError):
            return False
        if o is NotImplemented:
            return False
        return self.value == o

    def __hash__(self):
        # equal to the int self.value, so hash like it
        return hash(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"PrimeFieldElement({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def legendre(self) -> int:
        return euler_criterion(self.value, self.modulus)

    def is_square(self) -> bool:
        return self.legendre() >= 0

    def sqrt(self) -> Optional["PrimeFieldElement"]:
        return sqrt_mod_p(self)

    def encode(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime p >= 5."""

    p: int

    def __post_init__(self):
        check_modulus(self.p)

    @property
    def order(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return 1

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, value: Union[int, Fraction, PrimeFieldElement]) -> PrimeFieldElement:
        if isinstance(value, PrimeFieldElement):
            return PrimeFieldElement(value.value, self.p)
        return self.from_rational(value)

    def from_rational(self, x: Union[int, Fraction]) -> PrimeFieldElement:
        return PrimeFieldElement(rational_mod(x, self.p, self.p), self.p)

    @property
    def zero(self) -> PrimeFieldElement:
        return PrimeFieldElement(0, self.p)

    @property
    def one(self) -> PrimeFieldElement:
        return PrimeFieldElement(1, self.p)

    def elements_array(self) -> Tuple[np.ndarray]:
        """All elements as one int64 coordinate array."""
        return (np.arange(self.p, dtype=np.int64),)

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True, eq=False)
class QuadExtElement:
    """a0 + a1*w in F_p[w]/(w^2 - n), n the smallest non-residue mod p."""

    a0: PrimeFieldElement
    a1: PrimeFieldElement

    def __post_init__(self):
        if self.a0.modulus != self.a1.modulus:
            raise InvalidModulusError("Both coordinates must share one modulus.")

    @property
    def modulus(self) -> int:
        return self.a0.modulus

    @property
    def nonresidue(self) -> int:
        return smallest_nonresidue(self.modulus)

    @property
    def field(self) -> "QuadExtField":
        return QuadExtField(self.modulus)

    def _coerce(self, other):
        if isinstance(other, QuadExtElement):
            if other.modulus != self.modulus:
                raise InvalidModulusError(
                    f"Cannot mix F_{self.modulus}^2 and F_{other.modulus}^2 elements."
                )
            return other
        if isinstance(other, PrimeFieldElement) and other.modulus != self.modulus:
            raise InvalidModulusError(
                f"Cannot mix F_{self.modulus}^2 and F_{other.modulus} elements."
            )
        if isinstance(other, (PrimeFieldElement, int, Fraction)) and not isinstance(
            other, bool
        ):
            return self.field.embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtElement(self.a0 + o.a0, self.a1 + o.a1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtElement(self.a0 - o.a0, self.a1 - o.a1)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadExtElement(-self.a0, -self.a1)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = self.nonresidue
        return QuadExtElement(
            self.a0 * o.a0 + self.a1 * o.a1 * n,
            self.a0 * o.a1 + self.a1 * o.a0,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        return _power(self, e)

    def norm(self) -> PrimeFieldElement:
        """a0^2 - n*a1^2, the product of the element and its conjugate."""
        return self.a0 * self.a0 - self.a1 * self.a1 * self.nonresidue

    def conjugate(self) -> "QuadExtElement":
        return QuadExtElement(self.a0, -self.a1)

    def frobenius(self) -> "QuadExtElement":
        """x -> x^p, which is conjugation since w^p = -w."""
        return self.conjugate()

    def inverse(self) -> "QuadExtElement":
        nrm = self.norm()
        if nrm.is_zero():
            raise ZeroDivisionError(f"0 has no inverse in F_{self.modulus}^2.")
        inv = nrm.inverse()
        return QuadExtElement(self.a0 * inv, -self.a1 * inv)

    def is_zero(self) -> bool:
        return self.a0.is_zero() and self.a1.is_zero()

    def in_base_field(self) -> bool:
        return self.a1.is_zero()

    def legendre(self) -> int:
        """Quadratic character of F_{p^2}: x is a square iff its norm is a square in F_p."""
        return self.norm().legendre()

    def is_square(self) -> bool:
        return self.legendre() >= 0

    def __eq__(self, other):
        if isinstance(other, QuadExtElement):
            return (
                self.modulus == other.modulus
                and self.a0 == other.a0
                and self.a1 == other.a1
            )
        try:
            o = self._coerce(other)
        except (InvalidModulusError, PreconditionError):
            return False
        if o is NotImplemented:
            return False
        return self == o

    def __hash__(self):
        if self.in_base_field():
            return hash(self.a0)
        return hash((self.a0.value, self.a1.value, self.modulus))

    def __repr__(self):
        return f"QuadExtElement({self.a0.value}, {self.a1.value}, {self.modulus})"

    def __str__(self):
        return self.encode()

    def encode(self) -> str:
        return f"{self.a0.value}+{self.a1.value}*w"


@dataclass(frozen=True)
class QuadExtField:
    """F_{p^2} built as F_p[w]/(w^2 - n) with n = find_nonresidue(p)."""

    p: int

    def __post_init__(self):
        check_modulus(self.p)

    @property
    def nonresidue(self) -> int:
        return smallest_nonresidue(self.p)

    @property
    def order(self) -> int:
        return self.p * self.p

    @property
    def degree(self) -> int:
        return 2

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def base(self) -> PrimeField:
        return PrimeField(self.p)

    def __call__(self, a0, a1=0) -> QuadExtElement:
        if isinstance(a0, QuadExtElement):
            return a0
        return QuadExtElement(self.base(a0), self.base(a1))

    def embed(self, x: Union[int, Fraction, PrimeFieldElement]) -> QuadExtElement:
        return QuadExtElement(self.base(x), self.base.zero)

    from_rational = embed

    @property
    def zero(self) -> QuadExtElement:
        return self(0)

    @property
    def one(self) -> QuadExtElement:
        return self(1)

    @property
    def generator(self) -> QuadExtElement:
        """w, with w^2 = n."""
        return self(0, 1)

    def sqrt_of_base(self, x) -> Tuple[QuadExtElement, QuadExtElement]:
        """Both square roots in F_{p^2} of an element of F_p, canonical root first."""
        x = self.base(x)
        r = sqrt_mod_p(x)
        if r is not None:
            root = self.embed(r)
        else:
            # x non-residue: x/n is a residue and sqrt(x) = sqrt(x/n) * w
            s = sqrt_mod_p(x / self.nonresidue)
            root = QuadExtElement(self.base.zero, s)
        return root, -root

    def elements_array(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinates (a0, a1) of all p^2 elements, a0 varying fastest."""
        base = np.arange(self.p, dtype=np.int64)
        return np.tile(base, self.p), np.repeat(base, self.p)

    def __str__(self):
        return f"F_{self.p}^2"


FieldElement = Union[PrimeFieldElement, QuadExtElement]
Field = Union[PrimeField, QuadExtField]


def field_of(x) -> Optional[Field]:
    """The finite field of an element, or None for rationals."""
    if isinstance(x, (PrimeFieldElement, QuadExtElement)):
        return x.field
    return None


@lru_cache(maxsize=None)
def find_nonresidue(p: int) -> PrimeFieldElement:
    """Smallest positive quadratic non-residue mod p, as an element of F_p."""
    check_modulus(p)
    return PrimeFieldElement(smallest_nonresidue(p), p)


def sqrt_mod_p(a: PrimeFieldElement) -> Optional[PrimeFieldElement]:
    """Square root in [0, (p-1)/2] of a residue, None for a non-residue."""
    r = canonical_sqrt(a.value, a.modulus)
    if r is None:
        return None
    return PrimeFieldElement(r, a.modulus)
