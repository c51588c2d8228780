"""Weierstrass models, the E0/E1 constructions and exhaustive point counting.

E0 is the short model over Q with j(E0) = j0. E1 is the model
``y^2 + xy = x^3 - (1 - sqrt(z0))/864`` over the quadratic layer Q(sqrt(z0)),
z0 = 1 - 1728/j0; it is counted through its short model E1'.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import wraps
from typing import List, Optional, Tuple, Union

import numpy as np

from trunc_hgm.arith.fields import (
    PrimeField,
    PrimeFieldElement,
    QuadExtElement,
    QuadExtField,
    field_of,
    sqrt_mod_p,
)
from trunc_hgm.arith.ntheory import (
    as_rational,
    check_modulus,
    legendre_symbol,
    rational_p_valuation,
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
from trunc_hgm.hyperseries import TWO_F_ONE, TruncationLevel, truncated_sum_value
from trunc_hgm.reports import CongruenceReport

logger = logging.getLogger(__name__)

DEFAULT_POINT_BOUND = 10**6

Field = Union[PrimeField, QuadExtField]
Scalar = Union[Fraction, PrimeFieldElement, QuadExtElement]


def _coerce(x, field: Optional[Field]) -> Scalar:
    if field is None:
        if field_of(x) is not None:
            raise PreconditionError(f"{x!r} is not a rational number.")
        return as_rational(x)
    return field(x)


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q (field None) or a finite field.

    ``form`` is "short" when a1 = a2 = a3 = 0, in which case A = a4 and B = a6.
    """

    a1: Scalar
    a2: Scalar
    a3: Scalar
    a4: Scalar
    a6: Scalar
    field: Optional[Field] = None
    form: str = "general"

    def __post_init__(self):
        field = self.field
        if field is None:
            for c in (self.a1, self.a2, self.a3, self.a4, self.a6):
                if field_of(c) is not None:
                    field = field_of(c)
                    if isinstance(field, QuadExtField):
                        break
            object.__setattr__(self, "field", field)
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, _coerce(getattr(self, name), field))
        if self.form not in ("general", "short"):
            raise ValueError(
                f"Form {self.form} not recognized. Currently supported forms are: ['general', 'short']"
            )
        if self.form == "short" and not (self.a1 == 0 and self.a2 == 0 and self.a3 == 0):
            raise PreconditionError("A short model has a1 = a2 = a3 = 0.")
        if self.discriminant == 0:
            raise SingularCurveError(f"{self} has zero discriminant.")

    @classmethod
    def short(cls, A, B, field: Optional[Field] = None) -> "WeierstrassCurve":
        return cls(0, 0, 0, A, B, field=field, form="short")

    @classmethod
    def general(cls, a1, a2, a3, a4, a6, field: Optional[Field] = None) -> "WeierstrassCurve":
        return cls(a1, a2, a3, a4, a6, field=field, form="general")

    @property
    def A(self) -> Scalar:
        self._require_short()
        return self.a4

    @property
    def B(self) -> Scalar:
        self._require_short()
        return self.a6

    def _require_short(self):
        if self.form != "short":
            raise PreconditionError("Only defined for short Weierstrass models.")

    @property
    def b2(self):
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def c4(self):
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_invariant(self):
        return self.c4**3 / self.discriminant

    @property
    def is_rational(self) -> bool:
        return self.field is None

    def complete_square(self) -> "WeierstrassCurve":
        """y -> y - (a1 x + a3)/2, giving y^2 = x^3 + b2/4 x^2 + b4/2 x + b6/4."""
        return WeierstrassCurve.general(
            0, self.b2 / 4, 0, self.b4 / 2, self.b6 / 4, field=self.field
        )

    def depress(self) -> "WeierstrassCurve":
        """x -> x - a2/3 on a model with a1 = a3 = 0."""
        if not (self.a1 == 0 and self.a3 == 0):
            raise PreconditionError("Complete the square before depressing.")
        a2, a4, a6 = self.a2, self.a4, self.a6
        A = a4 - a2 * a2 / 3
        B = a6 - a2 * a4 / 3 + 2 * a2**3 / 27
        return WeierstrassCurve.short(A, B, field=self.field)

    def to_short(self) -> "WeierstrassCurve":
        if self.form == "short":
            return self
        return self.complete_square().depress()

    def base_change(self, field: Field) -> "WeierstrassCurve":
        coeffs = [field(c) for c in (self.a1, self.a2, self.a3, self.a4, self.a6)]
        return WeierstrassCurve(*coeffs, field=field, form=self.form)

    def quadratic_twist(self, d) -> "WeierstrassCurve":
        """y^2 = x^3 + d^2 A x + d^3 B."""
        E = self.to_short()
        return WeierstrassCurve.short(d * d * E.A, d**3 * E.B, field=self.field)

    def minimal_scaling(self, p: int) -> int:
        """k with (p^4k A, p^6k B) p-integral and minimal, for a short rational model."""
        self._require_short()
        if not self.is_rational:
            raise PreconditionError("Minimal models are computed over Q.")
        bounds = []
        for c, weight in ((self.A, 4), (self.B, 6)):
            if c != 0:
                bounds.append(-(rational_p_valuation(c, p) // weight))
        return max(bounds)

    def has_good_reduction(self, p: int) -> bool:
        check_modulus(p)
        E = self.to_short()
        k = E.minimal_scaling(p)
        return rational_p_valuation(E.discriminant, p) + 12 * k == 0

    def reduce(self, target: Union[int, Field]) -> "WeierstrassCurve":
        """The reduction of a rational curve at a good prime, over F_p or F_{p^2}."""
        field = PrimeField(target) if isinstance(target, int) else target
        p = field.characteristic
        if not self.is_rational:
            raise PreconditionError("Only rational curves are reduced.")
        E = self.to_short()
        if not E.has_good_reduction(p):
            raise PreconditionError(f"Curve has bad reduction at {p}.")
        k = E.minimal_scaling(p)
        u4, u6 = Fraction(p) ** (4 * k), Fraction(p) ** (6 * k)
        return WeierstrassCurve.short(E.A * u4, E.B * u6, field=field)

    def __str__(self):
        if self.form == "short":
            return f"y^2 = x^3 + ({self.a4})x + ({self.a6})"
        return (
            f"y^2 + ({self.a1})xy + ({self.a3})y = "
            f"x^3 + ({self.a2})x^2 + ({self.a4})x + ({self.a6})"
        )


def j_invariant(E: WeierstrassCurve):
    return E.j_invariant()


@dataclass(frozen=True)
class TraceRecord:
    """Point count |E(F_q)| and trace a = q + 1 - count."""

    q: int
    count: int
    a: int

    def __post_init__(self):
        if self.a != self.q + 1 - self.count:
            raise InvariantError(f"Trace {self.a} does not match count {self.count} over F_{self.q}.")
        if self.a * self.a > 4 * self.q:
            raise InvariantError(f"Trace {self.a} violates the Hasse bound over F_{self.q}.")


### Point counting


def _chi_table(p: int) -> np.ndarray:
    chi = -np.ones(p, dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    chi[xs * xs % p] = 1
    chi[0] = 0
    return chi


def _pair(c) -> Tuple[int, int]:
    if isinstance(c, QuadExtElement):
        return c.a0.value, c.a1.value
    return c.value, 0


def _pmul(x, y, n: int, p: int):
    return (
        (x[0] * y[0] + n * (x[1] * y[1] % p)) % p,
        (x[0] * y[1] + x[1] * y[0]) % p,
    )


def count_points(E: WeierstrassCurve, bound: int = DEFAULT_POINT_BOUND) -> TraceRecord:
    """|E(F_q)| from 1 + sum over x of (1 + chi(4x^3 + b2 x^2 + 2 b4 x + b6))."""
    field = E.field
    if field is None:
        raise PreconditionError("Point counting needs a curve over a finite field.")
    q, p = field.order, field.characteristic
    if q > bound:
        raise ResourceLimitError(f"Field size {q} exceeds the point-count bound {bound}.")
    chi = _chi_table(p)
    b2, b4, b6 = E.b2, E.b4, E.b6

    if isinstance(field, PrimeField):
        x = np.arange(p, dtype=np.int64)
        x2 = x * x % p
        x3 = x2 * x % p
        D = (4 * x3 + b2.value * x2 + 2 * b4.value * x + b6.value) % p
        s = int(chi[D].sum())
    else:
        n = field.nonresidue
        x = field.elements_array()
        x2 = _pmul(x, x, n, p)
        x3 = _pmul(x2, x, n, p)
        t2 = _pmul(x2, _pair(b2), n, p)
        t4 = _pmul(x, _pair(2 * b4), n, p)
        c6 = _pair(b6)
        D0 = (4 * x3[0] + t2[0] + t4[0] + c6[0]) % p
        D1 = (4 * x3[1] + t2[1] + t4[1] + c6[1]) % p
        norm = (D0 * D0 - n * (D1 * D1 % p)) % p
        s = int(chi[norm].sum())

    count = q + 1 + s
    logger.debug("counted %s points on %s over F_%s", count, E, q)
    return TraceRecord(q, count, q + 1 - count)


def frobenius_trace(E: WeierstrassCurve, p: int, bound: int = DEFAULT_POINT_BOUND) -> int:
    """a_p of a rational curve with good reduction at p."""
    return count_points(E.reduce(p), bound).a


### The curves E0 and E1


def z0_of(j0) -> Fraction:
    j0 = as_rational(j0)
    if j0 == 0 or j0 == 1728:
        raise ExcludedJError(f"j0 = {j0} is excluded.")
    return 1 - Fraction(1728) / j0


def build_E0(j0) -> WeierstrassCurve:
    """y^2 = x^3 - x/(48 z0^3) + 1/(864 z0^4) over Q, z0 = 1 - 1728/j0."""
    j0 = as_rational(j0)
    z0 = z0_of(j0)
    E = WeierstrassCurve.short(-1 / (48 * z0**3), 1 / (864 * z0**4))
    if E.j_invariant() != j0:
        raise InvariantError(f"j(E0) = {E.j_invariant()} differs from j0 = {j0}.")
    if E.discriminant != j0**8 / (j0 - 1728) ** 9:
        raise InvariantError(f"disc(E0) = {E.discriminant} does not match j0^8/(j0-1728)^9.")
    return E


def _check_root(z0, sqrt_z0, field: Field) -> None:
    if field.characteristic in (2, 3):
        raise PreconditionError("Characteristic must not divide 6.")
    if field(sqrt_z0) * field(sqrt_z0) != field(z0):
        raise BadRootError(f"{sqrt_z0} does not square to z0 = {z0} in {field}.")


def build_E1_general(z0, sqrt_z0, field: Field) -> WeierstrassCurve:
    """y^2 + xy = x^3 - (1 - sqrt_z0)/864 over the given field."""
    _check_root(z0, sqrt_z0, field)
    s = field(sqrt_z0)
    E1 = WeierstrassCurve.general(1, 0, 0, 0, -(1 - s) / 864, field=field)
    j0 = 1728 / (1 - field(as_rational(z0)))
    if E1.discriminant != 1 / j0:
        raise InvariantError(f"disc(E1) = {E1.discriminant} differs from 1/j0 = {1 / j0}.")
    return E1


def e1_model_chain(z0, sqrt_z0, field: Field) -> List[WeierstrassCurve]:
    """E1, its completed-square model and the short model E1', in order."""
    E1 = build_E1_general(z0, sqrt_z0, field)
    squared = E1.complete_square()
    return [E1, squared, squared.depress()]


def build_E1_reduced(z0, sqrt_z0, field: Field) -> WeierstrassCurve:
    """E1': y^2 = x^3 - x/48 + sqrt_z0/864, reached from E1 by the two substitutions."""
    E1_short = e1_model_chain(z0, sqrt_z0, field)[-1]
    j0 = 1728 / (1 - field(as_rational(z0)))
    if E1_short.j_invariant() != j0:
        raise InvariantError(f"j(E1') = {E1_short.j_invariant()} differs from j0 = {j0}.")
    return E1_short


def twist_gamma(E1: WeierstrassCurve, E2: WeierstrassCurve):
    """(A1/B1)/(A2/B2); the curves become isomorphic over the adjunction of sqrt(gamma)."""
    if E1.form != "short" or E2.form != "short":
        raise PreconditionError("twist_gamma needs short models.")
    if E1.A == 0 or E1.B == 0 or E2.A == 0 or E2.B == 0:
        raise PreconditionError("twist_gamma needs A, B != 0 (j not in {0, 1728}).")
    if E1.j_invariant() != E2.j_invariant():
        raise PreconditionError("twist_gamma needs curves with equal j-invariant.")
    gamma = (E1.A / E1.B) / (E2.A / E2.B)
    if (E1.A / E2.A) ** 3 != (E1.B / E2.B) ** 2:
        raise InvariantError("(A1/A2)^3 != (B1/B2)^2 for curves with equal j.")
    return gamma


### Hypotheses and the quadratic layer


def check_hypotheses(j0, p: int) -> Fraction:
    """z0 for (j0, p) satisfying the congruence hypotheses, HypothesisError otherwise."""
    check_modulus(p)
    j0 = as_rational(j0)
    z0 = z0_of(j0)
    if rational_p_valuation(j0, p) != 0:
        raise HypothesisError(f"v_{p}(j0) != 0 for j0 = {j0}.")
    if rational_p_valuation(j0 - 1728, p) != 0:
        raise HypothesisError(f"v_{p}(j0 - 1728) != 0 for j0 = {j0}.")
    return z0


def branch_of(z0, p: int) -> str:
    return "split" if legendre_symbol(z0, p) == 1 else "inert"


def quadratic_layer(z0, p: int) -> Tuple[str, Field, Tuple[Scalar, Scalar]]:
    """Branch, residue field of Q(sqrt(z0)) above p, and both roots of z0 there."""
    z0 = as_rational(z0)
    if z0 == 0 or rational_p_valuation(z0, p) != 0:
        raise PreconditionError(f"z0 = {z0} must be a {p}-adic unit.")
    branch = branch_of(z0, p)
    if branch == "split":
        field = PrimeField(p)
        r = sqrt_mod_p(field(z0))
        return branch, field, (r, -r)
    field = QuadExtField(p)
    return branch, field, field.sqrt_of_base(z0)


def _skip_on_precondition(check_id: str, key: str):
    """Turn a PreconditionError raised by the wrapped check into a skip report."""

    def decorator(fn):
        @wraps(fn)
        def wrapper(x, p, *args, **kwargs):
            try:
                return fn(x, p, *args, **kwargs)
            except PreconditionError as exc:
                logger.debug("%s skipped at p=%s: %s", check_id, p, exc)
                return CongruenceReport.skipped(check_id, p, str(exc), **{key: x})

        return wrapper

    return decorator


### Checks


def check_twist_gamma(j0, p: int) -> CongruenceReport:
    """gamma(E0, E1') against z0 * sqrt(z0) over the residue field, for both roots."""
    z0 = check_hypotheses(j0, p)
    branch, field, roots = quadratic_layer(z0, p)
    E0 = build_E0(j0).reduce(field)
    lhs, rhs = [], []
    for s in roots:
        lhs.append(twist_gamma(E0, build_E1_reduced(z0, s, field)))
        rhs.append(field(z0) * s)
    return CongruenceReport.compare(
        "2.1", p, lhs, rhs, l=field.degree, j0=j0, z0=z0, branch=branch
    )


def check_squares_equal(
    E1: WeierstrassCurve, E2: WeierstrassCurve, p: int, bound: int = DEFAULT_POINT_BOUND
) -> CongruenceReport:
    """a_p(E1)^2 against a_p(E2)^2 for rational curves with the same j."""
    j1, j2 = E1.j_invariant(), E2.j_invariant()
    if j1 != j2:
        raise PreconditionError(f"j-invariants differ: {j1} and {j2}.")
    if j1 in (0, 1728):
        raise ExcludedJError(f"j = {j1} is excluded.")
    for E in (E1, E2):
        if not E.has_good_reduction(p):
            raise PreconditionError(f"{E} has bad reduction at {p}.")
    a1, a2 = frobenius_trace(E1, p, bound), frobenius_trace(E2, p, bound)
    detail = {"a_p(E1)": a1, "a_p(E2)": a2}
    gamma = twist_gamma(E1.to_short(), E2.to_short())
    if gamma != 0 and rational_p_valuation(gamma, p) == 0:
        sign = legendre_symbol(gamma, p)
        detail["gamma"] = str(gamma)
        detail["twist_relation"] = a2 == sign * a1
    return CongruenceReport.compare("2.2", p, a1 * a1, a2 * a2, j0=j1, detail=detail)


@_skip_on_precondition("3.2", key="j0")
def check_cor_3_2(j0, p: int, bound: int = DEFAULT_POINT_BOUND) -> CongruenceReport:
    """a_p(E0)^2 against a_P(E1)^2 (split) or -(-1/p) a_P(E1) mod p (inert), both roots."""
    z0 = check_hypotheses(j0, p)
    branch, field, roots = quadratic_layer(z0, p)
    a0 = frobenius_trace(build_E0(j0), p, bound)
    traces = [count_points(build_E1_reduced(z0, s, field), bound).a for s in roots]
    if branch == "split":
        lhs = [a0 * a0] * 2
        rhs = [a * a for a in traces]
    else:
        sign = legendre_symbol(-1, p)
        lhs = [a0 * a0 % p] * 2
        rhs = [-sign * a % p for a in traces]
    return CongruenceReport.compare(
        "3.2",
        p,
        lhs,
        rhs,
        l=field.degree,
        j0=j0,
        z0=z0,
        branch=branch,
        detail={"a_p(E0)": a0, "a_P(E1)": traces},
    )


@_skip_on_precondition("3.4", key="z0")
def check_prop_3_4(z0, p: int, bound: int = DEFAULT_POINT_BOUND) -> CongruenceReport:
    """a_P(E1) against 2F1((1 - sqrt z0)/2) truncated at floor((N(P)-1)/6), mod p, both roots."""
    check_modulus(p)
    z0 = as_rational(z0)
    if z0 == 1 or (1 - z0 != 0 and rational_p_valuation(1 - z0, p) != 0):
        raise PreconditionError(f"1 - z0 must be a {p}-adic unit, z0 = {z0}.")
    branch, field, roots = quadratic_layer(z0, p)
    level = TruncationLevel.sixth(p, field.degree)
    lhs, rhs, traces = [], [], []
    for s in roots:
        a = count_points(build_E1_reduced(z0, s, field), bound).a
        traces.append(a)
        lhs.append(field(a))
        rhs.append(truncated_sum_value(TWO_F_ONE, (1 - s) / 2, level, p))
    return CongruenceReport.compare(
        "3.4",
        p,
        lhs,
        rhs,
        l=field.degree,
        z0=z0,
        branch=branch,
        detail={"a_P(E1)": traces, "truncation": level.r_max},
    )


def check_root_square_criterion(z0, p: int) -> CongruenceReport:
    """For inert z0, sqrt(z0) is a square in F_{p^2} iff (-1/p) = -1."""
    branch, field, roots = quadratic_layer(z0, p)
    if branch != "inert":
        raise PreconditionError(f"z0 = {z0} is a square mod {p}; the criterion needs the inert case.")
    expected = legendre_symbol(-1, p) == -1
    return CongruenceReport.compare(
        "3.2.root",
        p,
        [s.is_square() for s in roots],
        [expected, expected],
        l=2,
        z0=z0,
        branch=branch,
    )

