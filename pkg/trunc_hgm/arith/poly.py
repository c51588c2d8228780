"""Dense univariate polynomials over F_p, coefficient ``i`` at index ``i``."""

import hashlib
from typing import Iterable, Optional, Union

import numpy as np

from trunc_hgm.arith.fields import PrimeField, PrimeFieldElement, QuadExtElement
from trunc_hgm.arith.ntheory import check_modulus

__all__ = ["DensePolynomial"]

# np.convolve accumulates in int64
_INT64_SAFE = 1 << 62


def _normalize(coeffs: np.ndarray, p: int) -> np.ndarray:
    coeffs = np.mod(coeffs, p)
    nz = np.flatnonzero(coeffs)
    out = coeffs[: nz[-1] + 1] if nz.size else coeffs[:0]
    out = out.astype(np.int64 if p * p < _INT64_SAFE else object, copy=True)
    out.setflags(write=False)
    return out


class DensePolynomial:
    """Polynomial in t over F_p.

    Coefficients are reduced to [0, p) and trailing zeros are stripped, so the
    zero polynomial has an empty coefficient vector and degree -1.
    """

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Union[Iterable[int], np.ndarray], p: int):
        self.p = check_modulus(p)
        if not isinstance(coeffs, np.ndarray):
            coeffs = np.array([int(c) % p for c in coeffs], dtype=object)
        arr = coeffs.reshape(-1)
        if arr.dtype == object:
            arr = np.array([int(c) % p for c in arr], dtype=object)
        self.coeffs = _normalize(arr, p)

    @classmethod
    def zero(cls, p: int) -> "DensePolynomial":
        return cls([], p)

    @classmethod
    def constant(cls, c: int, p: int) -> "DensePolynomial":
        return cls([c], p)

    @classmethod
    def monomial(cls, degree: int, p: int, c: int = 1) -> "DensePolynomial":
        coeffs = np.zeros(degree + 1, dtype=np.int64)
        coeffs[degree] = c % p
        return cls(coeffs, p)

    @classmethod
    def variable(cls, p: int) -> "DensePolynomial":
        return cls.monomial(1, p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __getitem__(self, i: int) -> int:
        """Coefficient of t**i, zero beyond the degree."""
        if 0 <= i < len(self.coeffs):
            return int(self.coeffs[i])
        return 0

    def _same_field(self, other) -> "DensePolynomial":
        if isinstance(other, DensePolynomial):
            if other.p != self.p:
                raise ValueError(f"Cannot mix polynomials over F_{self.p} and F_{other.p}.")
            return other
        if isinstance(other, PrimeFieldElement):
            return DensePolynomial.constant(other.value, self.p)
        if isinstance(other, int) and not isinstance(other, bool):
            return DensePolynomial.constant(other, self.p)
        return NotImplemented

    def _padded(self, n: int) -> np.ndarray:
        out = np.zeros(n, dtype=self.coeffs.dtype)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def __add__(self, other):
        other = self._same_field(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return DensePolynomial(self._padded(n) + other._padded(n), self.p)

    __radd__ = __add__

    def __neg__(self):
        return DensePolynomial(-self.coeffs, self.p)

    def __sub__(self, other):
        other = self._same_field(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._same_field(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._same_field(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return DensePolynomial.zero(self.p)
        n = min(len(self.coeffs), len(other.coeffs))
        if self.coeffs.dtype != object and (self.p - 1) ** 2 * n < _INT64_SAFE:
            return DensePolynomial(np.convolve(self.coeffs, other.coeffs), self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += int(a) * int(b)
        return DensePolynomial(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "DensePolynomial":
        if e < 0:
            raise ValueError("Negative powers of polynomials are not defined.")
        result = DensePolynomial.constant(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: int) -> "DensePolynomial":
        return DensePolynomial(self.coeffs * (c % self.p), self.p)

    def compose(self, inner: "DensePolynomial") -> "DensePolynomial":
        """self(inner(t)) by Horner's rule."""
        inner = self._same_field(inner)
        result = DensePolynomial.zero(self.p)
        for c in self.coeffs[::-1]:
            result = result * inner + int(c)
        return result

    def substitute_power(self, e: int) -> "DensePolynomial":
        """self(t**e)."""
        if e < 1:
            raise ValueError(f"Exponent must be positive, got {e}.")
        if self.is_zero():
            return self
        out = np.zeros(self.degree * e + 1, dtype=self.coeffs.dtype)
        out[::e] = self.coeffs
        return DensePolynomial(out, self.p)

    def truncate(self, m: int) -> "DensePolynomial":
        """Drop every term of degree above m."""
        return DensePolynomial(self.coeffs[: max(m + 1, 0)], self.p)

    def evaluate(self, x):
        """Value at x, for x an int, an F_p element or an F_{p^2} element."""
        if isinstance(x, QuadExtElement):
            if x.modulus != self.p:
                raise ValueError(f"Cannot evaluate over F_{self.p} at {x!r}.")
            acc = x.field.zero
        else:
            acc = PrimeFieldElement(0, self.p)
            x = acc + x
        for c in self.coeffs[::-1]:
            acc = acc * x + int(c)
        return acc

    __call__ = evaluate

    def first_difference(self, other: "DensePolynomial") -> Optional[int]:
        """Lowest degree where the coefficients differ, None if equal."""
        n = max(len(self.coeffs), len(other.coeffs))
        diff = np.flatnonzero(self._padded(n) != other._padded(n))
        return int(diff[0]) if diff.size else None

    def fingerprint(self) -> str:
        h = hashlib.sha256(f"{self.p}:".encode())
        h.update(",".join(str(int(c)) for c in self.coeffs).encode())
        return h.hexdigest()[:16]

    def to_list(self):
        return [int(c) for c in self.coeffs]

    def __eq__(self, other):
        if isinstance(other, (int, PrimeFieldElement)):
            other = self._same_field(other)
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, tuple(self.to_list())))

    def __repr__(self):
        return f"DensePolynomial({self.to_list()}, p={self.p})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.to_list()):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "t" if i == 1 else f"t^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)
