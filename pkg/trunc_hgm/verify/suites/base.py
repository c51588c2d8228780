import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from trunc_hgm.arith.ntheory import as_rational, primes_between
from trunc_hgm.curves import DEFAULT_POINT_BOUND
from trunc_hgm.errors import ConfigError, PreconditionError, ResourceLimitError
from trunc_hgm.reports import CongruenceReport, encode_value
from trunc_hgm.utils import timed
from trunc_hgm.verify.sweep import run_parallel, summarize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteParams:
    """Parameter grid shared by all suites.

    ``j0_values=None`` means every residue 1, ..., p - 1 at each prime.
    ``degree_cap=None`` leaves the l = 2 instances of the p^2 factorization
    suite skipped; pass a cap to opt in.
    """

    primes: Tuple[int, ...] = tuple(primes_between(5, 37))
    levels: Tuple[int, ...] = (1,)
    j0_values: Optional[Tuple[Fraction, ...]] = None
    a_values: Tuple[Fraction, ...] = (Fraction(1, 6), Fraction(5, 6), Fraction(1, 2))
    m_max: int = 200
    r_max: int = 200
    twist_factors: Tuple[int, ...] = (-1, 2, 3)
    degree_cap: Optional[int] = None
    bound: int = DEFAULT_POINT_BOUND
    precision: int = 1
    timing: bool = False
    executor: str = "process"

    def __post_init__(self):
        bad_levels = [l for l in self.levels if l not in (1, 2)]
        if bad_levels:
            raise ConfigError(f"Levels must be 1 or 2, got {bad_levels}.")
        if self.precision not in (1, 2):
            raise ConfigError(f"Precision must be 1 or 2, got {self.precision}.")
        object.__setattr__(self, "primes", tuple(sorted(set(self.primes))))
        object.__setattr__(self, "a_values", tuple(as_rational(a) for a in self.a_values))
        if self.j0_values is not None:
            values = sorted(set(as_rational(j) for j in self.j0_values))
            object.__setattr__(self, "j0_values", tuple(values))

    @classmethod
    def for_range(cls, p_min: int, p_max: int, **kwargs) -> "SuiteParams":
        return cls(primes=tuple(primes_between(p_min, p_max)), **kwargs)

    def j_values(self, p: int) -> List[Fraction]:
        if self.j0_values is None:
            return [Fraction(j) for j in range(1, p)]
        return list(self.j0_values)


def _suite_task(payload) -> CongruenceReport:
    cls, params, inst = payload
    suite = cls()
    try:
        report, ms = timed(suite.run_instance, params, **inst)
    except (PreconditionError, ResourceLimitError) as exc:
        logger.debug("%s skipped at %s: %s", suite.suite_id, inst, exc)
        return suite.skip(inst, exc)
    logger.debug("%s at %s: %s", suite.suite_id, inst, report.verdict)
    return report.with_timing(ms) if params.timing else report


class Suite:
    """A family of instances of one check.

    Subclasses set ``suite_id`` and implement ``instances`` (one dict of keyword
    arguments per instance, always with ``p``) and ``run_instance``.
    """

    suite_id: str = ""

    def __init__(self, meta: Optional[Dict[str, Any]] = None):
        self.META = dict(meta or {})

    def instances(self, params: SuiteParams) -> List[Dict[str, Any]]:
        raise NotImplementedError

    def run_instance(self, params: SuiteParams, **inst) -> CongruenceReport:
        raise NotImplementedError

    def skip(self, inst: Dict[str, Any], exc: Exception) -> CongruenceReport:
        return CongruenceReport.skipped(
            self.suite_id,
            inst["p"],
            str(exc),
            l=inst.get("l"),
            j0=inst.get("j0"),
            z0=inst.get("z0"),
        )

    def run(self, params: Optional[SuiteParams] = None, workers: int = 1) -> List[CongruenceReport]:
        params = params or SuiteParams()
        payloads = [(type(self), params, inst) for inst in self.instances(params)]
        reports = run_parallel(_suite_task, payloads, workers, params.executor)
        summarize(reports, f"suite {self.suite_id}")
        return reports


### Instance grids


def by_level(params: SuiteParams) -> List[Dict[str, Any]]:
    return [{"p": p, "l": l} for p in params.primes for l in params.levels]


def by_j0(params: SuiteParams) -> List[Dict[str, Any]]:
    return [{"p": p, "j0": j0} for p in params.primes for j0 in params.j_values(p)]


def with_j0(report: CongruenceReport, j0) -> CongruenceReport:
    """The report with j0 filled in, for checks keyed by z0."""
    return replace(report, j0=encode_value(as_rational(j0)))
