from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from sympy import primerange

from trunc_hgm.arith.fields import (
    PrimeField,
    QuadExtElement,
    QuadExtField,
    find_nonresidue,
    sqrt_mod_p,
)
from trunc_hgm.errors import InvalidModulusError


PRIMES_TO_37 = list(primerange(5, 38))


@pytest.mark.parametrize("p", PRIMES_TO_37)
def test_prime_field_arithmetic(p):
    """Test field axioms on F_p exhaustively."""
    F = PrimeField(p)
    elements = [F(a) for a in range(p)]
    for a, b in product(range(p), repeat=2):
        x, y = elements[a], elements[b]
        assert (x + y).value == (a + b) % p
        assert (x * y).value == a * b % p
        assert x + y == y + x and x * y == y * x
        assert (x - y) + y == x
        if b:
            assert (x / y) * y == x, f"{a}/{b} * {b} != {a} in F_{p}"
    for x, y, z in product(elements, repeat=3):
        assert (x * y) * z == x * (y * z), f"associativity fails in F_{p}"
        assert x * (y + z) == x * y + x * z, f"distributivity fails in F_{p}"
    assert F(p - 1) ** (p - 1) == F.one


@pytest.mark.parametrize("p", PRIMES_TO_37)
def test_quadratic_extension_axioms(p):
    """Inverses and x^(p^2) = x on all of F_{p^2}; ring axioms on seeded samples."""
    K = QuadExtField(p)
    elements = [K(a0, a1) for a0, a1 in product(range(p), repeat=2)]
    for x in elements:
        assert x ** (p * p) == x, f"{x}^({p}^2) != {x}"
        assert x.frobenius().frobenius() == x
        if not x.is_zero():
            assert x * x.inverse() == K.one
            assert x.inverse().inverse() == x
    rng = np.random.default_rng(p)
    for i, j, k in rng.integers(0, len(elements), size=(500, 3)):
        x, y, z = elements[i], elements[j], elements[k]
        assert x * y == y * x and x + y == y + x
        assert (x * y) * z == x * (y * z), f"associativity fails for {x}, {y}, {z}"
        assert x * (y + z) == x * y + x * z, f"distributivity fails for {x}, {y}, {z}"


@pytest.mark.parametrize(
    "x, y",
    [
        (PrimeField(5)(1), PrimeField(7)(1)),
        (QuadExtField(5)(1), PrimeField(7)(1)),
        (QuadExtField(5)(1), QuadExtField(7)(1)),
    ],
)
def test_equality_across_fields(x, y):
    """Elements of different fields are unequal rather than an error."""
    assert x != y and y != x
    assert not (x == y)


def test_hash_matches_int():
    """Elements hash like the integers they equal, so they mix in sets and dicts."""
    F, K = PrimeField(7), QuadExtField(7)
    assert F(3) == 3 and hash(F(3)) == hash(3)
    assert K(3) == F(3) and hash(K(3)) == hash(F(3))
    assert {F(3), 3, K(3)} == {3}
    assert {F(1): "one"}[1] == "one"


def test_prime_field_rationals():
    """Test that p-integral rationals embed and mix with ints."""
    F = PrimeField(7)
    assert F(Fraction(1, 6)) == 6
    assert F(3) + Fraction(1, 2) == F(3 + 4)
    assert 1 - F(2) == F(6)
    assert F(3) != Fraction(1, 7)


def test_mixed_moduli():
    """Test that elements of different fields cannot be combined."""
    with pytest.raises(InvalidModulusError):
        PrimeField(5)(1) + PrimeField(7)(1)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_quadratic_extension(p):
    """Test w^2 = n, Frobenius as x^p, multiplicativity of the norm and inverses."""
    K = QuadExtField(p)
    w = K.generator
    assert w * w == K(K.nonresidue)
    elements = [K(a0, a1) for a0, a1 in product(range(p), repeat=2)]
    for x in elements:
        assert x**p == x.frobenius(), f"{x}^{p} != frobenius({x})"
        if not x.is_zero():
            assert x * x.inverse() == K.one
    for x, y in zip(elements[1:], elements[2:]):
        assert (x * y).norm() == x.norm() * y.norm()


@pytest.mark.parametrize("p", [5, 7, 13])
def test_quadratic_extension_squares(p):
    """Test the norm criterion for squares against brute force in F_{p^2}."""
    K = QuadExtField(p)
    elements = [K(a0, a1) for a0, a1 in product(range(p), repeat=2)]
    squares = {(x * x).encode() for x in elements}
    for x in elements:
        assert x.is_square() == (x.encode() in squares), f"{x}"


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_sqrt_of_base(p):
    """Every element of F_p has both square roots in F_{p^2}."""
    K = QuadExtField(p)
    for a in range(p):
        r1, r2 = K.sqrt_of_base(a)
        assert r1 * r1 == a and r2 * r2 == a
        assert r1 == -r2
        assert r1.in_base_field() == (a == 0 or PrimeField(p)(a).is_square())


def test_encoding():
    """Elements of F_{p^2} encode as a0+a1*w; base elements compare equal to ints."""
    K = QuadExtField(7)
    assert K(3, 5).encode() == "3+5*w"
    assert K(-1).encode() == "6+0*w"
    assert K(4) == 4
    assert K(4) == PrimeField(7)(4)
    assert isinstance(K(2) * Fraction(1, 2), QuadExtElement)


def test_nonresidue_and_sqrt():
    """Test the smallest non-residue and square roots in F_p."""
    assert find_nonresidue(7) == 3
    assert find_nonresidue(5) == 2
    F = PrimeField(13)
    assert sqrt_mod_p(F(10)) ** 2 == F(10)
    assert sqrt_mod_p(F(2)) is None


def test_field_properties():
    """Test orders and degrees."""
    assert PrimeField(11).order == 11 and PrimeField(11).degree == 1
    assert QuadExtField(11).order == 121 and QuadExtField(11).degree == 2
    a0, a1 = QuadExtField(5).elements_array()
    assert len(a0) == len(a1) == 25
