"""The congruence a_p(E0)^2 = (z0/p) 3F2(1/2,1/6,5/6;1,1 | 1728/j0)_{p-1} mod p."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from trunc_hgm.arith.fields import PrimeField
from trunc_hgm.arith.ntheory import as_rational, legendre_symbol
from trunc_hgm.curves import (
    DEFAULT_POINT_BOUND,
    branch_of,
    build_E0,
    build_E1_reduced,
    check_cor_3_2,
    check_hypotheses,
    check_prop_3_4,
    frobenius_trace,
    quadratic_layer,
)
from trunc_hgm.errors import PreconditionError
from trunc_hgm.hyperseries import (
    THREE_F_TWO,
    TWO_F_ONE,
    TruncationLevel,
    truncated_sum_value,
)
from trunc_hgm.reports import CongruenceReport

logger = logging.getLogger(__name__)

BRANCH_CHECKS = {"split": "final.4", "inert": "final.5"}


@dataclass(frozen=True)
class TheoremInstance:
    """(j0, p) satisfying p not dividing 6 and v_p(j0) = v_p(j0 - 1728) = 0."""

    j0: Fraction
    p: int
    z0: Fraction
    branch: str

    @property
    def sign(self) -> int:
        return 1 if self.branch == "split" else -1


def theorem_instance(j0, p: int) -> TheoremInstance:
    """Validate the hypotheses; raises HypothesisError (or ExcludedJError) with the reason."""
    j0 = as_rational(j0)
    z0 = check_hypotheses(j0, p)
    return TheoremInstance(j0, p, z0, branch_of(z0, p))


def _three_f_two_side(inst: TheoremInstance):
    F = PrimeField(inst.p)
    value = truncated_sum_value(
        THREE_F_TWO, F(Fraction(1728) / inst.j0), TruncationLevel.full(inst.p), inst.p, 1
    )
    return value * legendre_symbol(inst.z0, inst.p)


def verify_theorem(j0, p: int, bound: int = DEFAULT_POINT_BOUND) -> CongruenceReport:
    """Compare a_p(E0)^2 with (z0/p) times the 3F2 sum truncated at p - 1, in F_p."""
    try:
        inst = theorem_instance(j0, p)
    except PreconditionError as exc:
        logger.debug("theorem skipped at p=%s, j0=%s: %s", p, j0, exc)
        return CongruenceReport.skipped("theorem", p, str(exc), l=1, j0=as_rational(j0))
    F = PrimeField(p)
    a = frobenius_trace(build_E0(inst.j0), p, bound)
    report = CongruenceReport.compare(
        "theorem",
        p,
        F(a * a),
        _three_f_two_side(inst),
        l=1,
        j0=inst.j0,
        z0=inst.z0,
        branch=inst.branch,
        detail={"a_p(E0)": a},
    )
    if report.failed:
        logger.warning("theorem fails at p=%s, j0=%s", p, inst.j0)
    return report


def check_branch_proposition(
    j0, p: int, branch: Optional[str] = None, bound: int = DEFAULT_POINT_BOUND
) -> CongruenceReport:
    """Route a_p(E0)^2 through E1 and the truncated 2F1 to +-3F2, over the residue field of P.

    Split: a_p(E0)^2 and 2F1((1-s)/2)_{floor((p-1)/6)}^2 against 3F2.
    Inert: a_p(E0)^2 and -(-1/p) 2F1((1-s)/2)_{floor((p^2-1)/6)} against -3F2.
    Both roots s of z0 are used. A ``branch`` different from the instance's gives a skip.
    """
    check_id = BRANCH_CHECKS.get(branch, "final")
    try:
        inst = theorem_instance(j0, p)
    except PreconditionError as exc:
        return CongruenceReport.skipped(check_id, p, str(exc), j0=as_rational(j0))
    if branch is None:
        branch = inst.branch
        check_id = BRANCH_CHECKS[branch]
    if branch not in BRANCH_CHECKS:
        raise ValueError(
            f"Branch {branch} not recognized. Currently supported branches are: {list(BRANCH_CHECKS)}"
        )
    if inst.branch != branch:
        return CongruenceReport.skipped(
            check_id,
            p,
            f"z0 = {inst.z0} is {inst.branch} at {p}, not {branch}.",
            j0=inst.j0,
            z0=inst.z0,
            branch=inst.branch,
        )

    _, K, roots = quadratic_layer(inst.z0, p)
    a = frobenius_trace(build_E0(inst.j0), p, bound)
    target = K(_three_f_two_side(inst).value)
    level = TruncationLevel.sixth(p, K.degree)
    lhs = [K(a * a)]
    for s in roots:
        value = truncated_sum_value(TWO_F_ONE, (1 - s) / 2, level, p)
        if branch == "split":
            lhs.append(value * value)
        else:
            lhs.append(value * (-legendre_symbol(-1, p)))
    return CongruenceReport.compare(
        check_id,
        p,
        lhs,
        [target] * len(lhs),
        l=K.degree,
        j0=inst.j0,
        z0=inst.z0,
        branch=branch,
        detail={"a_p(E0)": a, "E1'": [str(build_E1_reduced(inst.z0, s, K)) for s in roots]},
    )


def verify_chain(j0, p: int, bound: int = DEFAULT_POINT_BOUND) -> List[CongruenceReport]:
    """The theorem at (j0, p) followed by the checks its proof runs through."""
    reports = [verify_theorem(j0, p, bound), check_cor_3_2(j0, p, bound)]
    try:
        inst = theorem_instance(j0, p)
    except PreconditionError:
        return reports
    reports.append(check_prop_3_4(inst.z0, p, bound))
    reports.append(check_branch_proposition(inst.j0, p, bound=bound))
    return reports
