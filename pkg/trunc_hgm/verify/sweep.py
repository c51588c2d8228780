"""Sweeps of the congruence over ranges of primes, on a worker pool."""

import logging
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from trunc_hgm.arith.ntheory import as_rational, primes_between
from trunc_hgm.curves import DEFAULT_POINT_BOUND
from trunc_hgm.errors import ConfigError, ResourceLimitError
from trunc_hgm.reports import CongruenceReport, count_verdicts
from trunc_hgm.utils import timed
from trunc_hgm.verify.theorem import verify_theorem

logger = logging.getLogger(__name__)

TRUNCATED = "scan.truncated"


### Worker pools


def _serial_map(fn: Callable, payloads: Sequence, workers: int) -> List:
    return [fn(x) for x in payloads]


def _thread_map(fn: Callable, payloads: Sequence, workers: int) -> List:
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads))


def _process_map(fn: Callable, payloads: Sequence, workers: int) -> List:
    chunksize = max(1, len(payloads) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads, chunksize=chunksize))


def _get_map_func(executor: str) -> Callable:
    executors = {
        "serial": _serial_map,
        "thread": _thread_map,
        "process": _process_map,
    }
    if executor not in executors:
        raise ValueError(
            f"Executor {executor} not recognized. Currently supported executors are: {list(executors.keys())}"
        )
    return executors[executor]


def run_parallel(
    fn: Callable, payloads: Sequence, workers: int = 1, executor: str = "process"
) -> List:
    """fn over payloads, results in payload order."""
    if workers <= 1 or len(payloads) <= 1:
        executor = "serial"
    return _get_map_func(executor)(fn, list(payloads), workers)


### j0 selection


@dataclass(frozen=True)
class JPolicy:
    """Which j0 to try at each prime: every residue, a fixed list, or a seeded sample."""

    kind: str = "all"
    values: Tuple[Fraction, ...] = ()
    n: int = 0
    seed: int = 0

    def __post_init__(self):
        kinds = ("all", "list", "random")
        if self.kind not in kinds:
            raise ConfigError(
                f"j policy {self.kind} not recognized. Currently supported policies are: {list(kinds)}"
            )
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))
        if self.kind == "random" and self.n < 1:
            raise ConfigError(f"A random j policy needs n >= 1, got {self.n}.")

    @classmethod
    def all_residues(cls) -> "JPolicy":
        return cls("all")

    @classmethod
    def explicit(cls, values: Sequence) -> "JPolicy":
        return cls("list", tuple(values))

    @classmethod
    def random(cls, n: int, seed: int = 0) -> "JPolicy":
        return cls("random", n=n, seed=seed)

    def j_values(self, p: int) -> List[Fraction]:
        """j0 for the prime p, ascending. Residues are lifted to integers in [0, p)."""
        if self.kind == "all":
            return [Fraction(j) for j in range(p)]
        if self.kind == "list":
            return sorted(set(self.values))
        rng = np.random.default_rng((self.seed, p))
        picked = rng.choice(np.arange(1, p), size=min(self.n, p - 1), replace=False)
        return [Fraction(int(j)) for j in np.sort(picked)]


### Scans


def _theorem_task(payload) -> CongruenceReport:
    j0, p, bound, timing = payload
    try:
        report, ms = timed(verify_theorem, j0, p, bound)
    except ResourceLimitError as exc:
        return CongruenceReport.skipped(TRUNCATED, p, str(exc), j0=j0)
    logger.debug("theorem p=%s j0=%s: %s", p, j0, report.verdict)
    return report.with_timing(ms) if timing else report


def truncate_at_marker(reports: Sequence[CongruenceReport]) -> List[CongruenceReport]:
    """Everything up to and including the first truncation marker."""
    out = []
    for r in reports:
        out.append(r)
        if r.check_id == TRUNCATED:
            break
    return out


def summarize(reports: Sequence[CongruenceReport], label: str) -> None:
    counts = count_verdicts(reports)
    logger.info(
        "%s: %d reports, %d pass, %d fail, %d skip",
        label,
        len(reports),
        counts["pass"],
        counts["fail"],
        counts["skip"],
    )


def scan_range(
    p_min: int,
    p_max: int,
    j_policy: Optional[JPolicy] = None,
    workers: int = 1,
    bound: int = DEFAULT_POINT_BOUND,
    timing: bool = False,
    executor: str = "process",
    max_instances: Optional[int] = None,
) -> List[CongruenceReport]:
    """verify_theorem over every prime in [p_min, p_max] and every j0 the policy picks.

    Reports are ordered by p, then j0. If the instance cap or the point-count
    bound is hit, the reports so far are returned followed by a
    ``scan.truncated`` skip report.
    """
    if p_min < 5:
        raise ConfigError(f"p_min must be at least 5, got {p_min}.")
    if p_min > p_max:
        raise ConfigError(f"Empty prime range [{p_min}, {p_max}].")
    policy = j_policy or JPolicy.all_residues()

    payloads = []
    truncated = None
    for p in primes_between(p_min, p_max):
        for j0 in policy.j_values(p):
            if max_instances is not None and len(payloads) >= max_instances:
                truncated = CongruenceReport.skipped(
                    TRUNCATED, p, f"instance cap {max_instances} reached", j0=j0
                )
                break
            payloads.append((j0, p, bound, timing))
        if truncated is not None:
            break

    reports = truncate_at_marker(run_parallel(_theorem_task, payloads, workers, executor))
    if truncated is not None and (not reports or reports[-1].check_id != TRUNCATED):
        reports.append(truncated)
    summarize(reports, f"scan [{p_min}, {p_max}]")
    return reports
