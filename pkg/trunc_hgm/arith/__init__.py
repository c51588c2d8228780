from trunc_hgm.arith.fields import (
    FieldElement,
    PrimeField,
    PrimeFieldElement,
    QuadExtElement,
    QuadExtField,
    field_of,
    find_nonresidue,
    sqrt_mod_p,
)
from trunc_hgm.arith.ntheory import (
    Rational,
    as_rational,
    check_modulus,
    is_prime,
    legendre_symbol,
    primes_between,
    rational_mod,
    rational_p_valuation,
)
from trunc_hgm.arith.poly import DensePolynomial
from trunc_hgm.arith.valres import ValuatedResidue, factorial_valres
