"""Command-line front end: ``trunc-hgm`` / ``python -m trunc_hgm``."""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence, TextIO

from trunc_hgm.config import FORMATS, RunConfig, resolve_config
from trunc_hgm.errors import ConfigError, InvalidModulusError
from trunc_hgm.find_suite import find_suite
from trunc_hgm.reports import CongruenceReport
from trunc_hgm.utils import prettify, reports_frame
from trunc_hgm.verify.supercongruence import supercongruence_range
from trunc_hgm.verify.suites import run_all_suites, run_lemma_suite
from trunc_hgm.verify.sweep import scan_range
from trunc_hgm.verify.theorem import verify_chain, verify_theorem

logger = logging.getLogger(__name__)

SELFTEST_P_MAX = 37


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--output", default=None, help="report file, '-' for stdout")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--bound", type=int, default=None, help="largest field size to count points over")
    common.add_argument("--precision", type=int, default=None, help="p-adic precision k (1 or 2)")
    common.add_argument("--l", type=int, default=None, help="residue-degree cap (1 or 2)")
    common.add_argument("--m-max", dest="m_max", type=int, default=None)
    common.add_argument("--degree-cap", dest="degree_cap", type=int, default=None)
    common.add_argument("--config", default=None, help="key = value config file")
    common.add_argument("--timing", action="store_true", default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def _add_range(parser: argparse.ArgumentParser):
    parser.add_argument("--p-min", dest="p_min", type=int, default=None)
    parser.add_argument("--p-max", dest="p_max", type=int, default=None)
    parser.add_argument("--j", nargs="+", default=None, help="j0 values, e.g. 2 -3375 7/2")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="trunc-hgm",
        description="Check the mod-p congruence between squared Frobenius traces and truncated 3F2 sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    theorem = sub.add_parser("theorem", parents=[common], help="one (p, j0) instance")
    theorem.add_argument("--p", type=int, required=True)
    theorem.add_argument("--j", nargs="+", required=True)
    theorem.add_argument("--chain", action="store_true", default=None, help="also run the checks the proof uses")

    scan = sub.add_parser("scan", parents=[common], help="sweep a prime range")
    _add_range(scan)
    scan.add_argument("--random", type=int, default=None, help="sample N j0 per prime")

    lemma = sub.add_parser("lemma", parents=[common], help="run one lemma suite")
    lemma.add_argument("suite", metavar="ID")
    _add_range(lemma)
    lemma.add_argument("--a", nargs="+", default=None, help="p-adic unit parameters")

    supercongruence = sub.add_parser("supercongruence", parents=[common], help="mod p^2 exploratory check")
    _add_range(supercongruence)

    sub.add_parser("selftest", parents=[common], help="every suite and the small theorem sweep")
    sub.add_parser("suites", parents=[common], help="list the available suites")
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def emit_report(reports: Sequence[CongruenceReport], format: str, sink: TextIO) -> None:
    """Write the reports to an open text sink as json, csv or an aligned table."""
    if format == "json":
        sink.write(json.dumps([r.to_record() for r in reports], indent=2) + "\n")
    elif format == "csv":
        reports_frame(reports).to_csv(sink, index=False, lineterminator="\n")
    elif format == "human":
        sink.write(prettify(reports) + "\n")
    else:
        raise ConfigError(
            f"Format {format} not recognized. Currently supported formats are: {list(FORMATS)}"
        )


def _write(reports: Sequence[CongruenceReport], config: RunConfig) -> None:
    if config.output == "-":
        fmt = config.format or ("human" if sys.stdout.isatty() else "json")
        emit_report(reports, fmt, sys.stdout)
        return
    fmt = config.format or "json"
    try:
        with open(config.output, "w", newline="") as sink:
            emit_report(reports, fmt, sink)
    except OSError as exc:
        raise ConfigError(f"Cannot write to {config.output}: {exc}") from exc


def _run_theorem(config: RunConfig) -> List[CongruenceReport]:
    reports = []
    for j0 in config.j:
        if config.chain:
            reports.extend(verify_chain(j0, config.p, config.bound))
        else:
            reports.append(verify_theorem(j0, config.p, config.bound))
    return reports


def _run_scan(config: RunConfig) -> List[CongruenceReport]:
    return scan_range(
        config.p_min,
        config.p_max,
        config.j_policy(),
        workers=config.workers,
        bound=config.bound,
        timing=config.timing,
    )


def _run_lemma(config: RunConfig) -> List[CongruenceReport]:
    return run_lemma_suite(config.suite, config.suite_params(), config.workers)


def _run_supercongruence(config: RunConfig) -> List[CongruenceReport]:
    return supercongruence_range(config.p_min, config.p_max, config.j or None, config.workers, config.bound)


def _run_selftest(config: RunConfig) -> List[CongruenceReport]:
    reports = run_all_suites(config.suite_params(), config.workers)
    reports += scan_range(5, SELFTEST_P_MAX, workers=config.workers, bound=config.bound)
    return reports


_COMMANDS = {
    "theorem": _run_theorem,
    "scan": _run_scan,
    "lemma": _run_lemma,
    "supercongruence": _run_supercongruence,
    "selftest": _run_selftest,
}


def exit_code(reports: Sequence[CongruenceReport]) -> int:
    """1 if any gating report failed, else 0."""
    return 1 if any(r.failed and r.gating for r in reports) else 0


def _list_suites(config: RunConfig) -> int:
    df = find_suite()
    fmt = config.format or ("human" if sys.stdout.isatty() else "json")
    if fmt == "json":
        sys.stdout.write(df.to_json(orient="records", indent=2) + "\n")
    elif fmt == "csv":
        df.to_csv(sys.stdout, index=False, lineterminator="\n")
    else:
        sys.stdout.write(df.to_string(index=False) + "\n")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    _configure_logging(args.verbose)

    flags = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    try:
        config = resolve_config(flags, args.config)
        if config.command == "suites":
            return _list_suites(config)
        reports = _COMMANDS[config.command](config)
        _write(reports, config)
    except (ConfigError, InvalidModulusError) as exc:
        parser.print_usage(sys.stderr)
        print(f"trunc-hgm: error: {exc}", file=sys.stderr)
        return 2
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
