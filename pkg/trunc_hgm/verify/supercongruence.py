"""Exploratory check of a_p(E0)^2 - 2p against the signed 3F2 sum modulo p^2.

The sign is the one of the mod-p congruence; the outcome is informational.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence

from trunc_hgm.arith.ntheory import (
    as_rational,
    legendre_symbol,
    primes_between,
    rational_mod,
)
from trunc_hgm.curves import DEFAULT_POINT_BOUND, build_E0, frobenius_trace
from trunc_hgm.errors import ConfigError, PreconditionError
from trunc_hgm.hyperseries import THREE_F_TWO, coefficient_residues
from trunc_hgm.reports import SUPERCONGRUENCE_CHECK, CongruenceReport
from trunc_hgm.verify.sweep import run_parallel, summarize
from trunc_hgm.verify.theorem import theorem_instance

logger = logging.getLogger(__name__)

# rational j-invariants of CM elliptic curves, without 0 and 1728
CM_J_INVARIANTS = tuple(
    Fraction(j)
    for j in (
        -3375,
        8000,
        -32768,
        54000,
        287496,
        -884736,
        -12288000,
        16581375,
        -884736000,
        -147197952000,
        -262537412640768000,
    )
)

SIGN_ASSUMPTION = "sign taken from the mod-p congruence"


def supercongruence_check(j0, p: int, bound: int = DEFAULT_POINT_BOUND) -> CongruenceReport:
    """lhs = a_p(E0)^2 - 2p mod p^2, rhs = (z0/p) 3F2(1728/j0)_{p-1} mod p^2."""
    try:
        inst = theorem_instance(j0, p)
    except PreconditionError as exc:
        return CongruenceReport.skipped(SUPERCONGRUENCE_CHECK, p, str(exc), j0=as_rational(j0))
    m = p * p
    a = frobenius_trace(build_E0(inst.j0), p, bound)
    coeffs = coefficient_residues(THREE_F_TWO, p, p - 1, power=2)
    z = rational_mod(Fraction(1728) / inst.j0, m, p)
    acc = 0
    for c in coeffs[::-1]:
        acc = (acc * z + int(c)) % m
    sign = legendre_symbol(inst.z0, p)
    lhs = (a * a - 2 * p) % m
    rhs = sign * acc % m
    logger.debug("supercongruence p=%s j0=%s: %s vs %s", p, inst.j0, lhs, rhs)
    return CongruenceReport.compare(
        SUPERCONGRUENCE_CHECK,
        p,
        lhs,
        rhs,
        l=1,
        j0=inst.j0,
        z0=inst.z0,
        branch=inst.branch,
        detail={
            "a_p(E0)": a,
            "modulus": m,
            "mod_p_agrees": lhs % p == rhs % p,
            "assumption": SIGN_ASSUMPTION,
        },
    )


def _supercongruence_task(payload) -> CongruenceReport:
    j0, p, bound = payload
    return supercongruence_check(j0, p, bound)


def supercongruence_range(
    p_min: int,
    p_max: int,
    j_values: Optional[Sequence] = None,
    workers: int = 1,
    bound: int = DEFAULT_POINT_BOUND,
    executor: str = "process",
) -> List[CongruenceReport]:
    """The supercongruence check at every prime in [p_min, p_max] and every j0, CM j-invariants by default."""
    if p_min < 5 or p_min > p_max:
        raise ConfigError(f"Invalid prime range [{p_min}, {p_max}].")
    js = sorted(set(as_rational(j) for j in (j_values or CM_J_INVARIANTS)))
    payloads = [(j0, p, bound) for p in primes_between(p_min, p_max) for j0 in js]
    reports = run_parallel(_supercongruence_task, payloads, workers, executor)
    summarize(reports, f"supercongruence [{p_min}, {p_max}]")
    return reports
