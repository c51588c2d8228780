"""Run configuration: defaults, then a config file, then the environment, then flags."""

import configparser
import logging
import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Tuple

from trunc_hgm.arith.ntheory import as_rational
from trunc_hgm.curves import DEFAULT_POINT_BOUND
from trunc_hgm.errors import ConfigError, PreconditionError
from trunc_hgm.verify.suites import SuiteParams
from trunc_hgm.verify.sweep import JPolicy

logger = logging.getLogger(__name__)

WORKERS_ENV = "TRUNC_HGM_WORKERS"
MAX_BOUND = 10**8
FORMATS = ("json", "csv", "human")


def _rationals(value) -> Tuple[Fraction, ...]:
    if isinstance(value, str):
        value = value.replace(",", " ").split()
    try:
        return tuple(as_rational(v) for v in value)
    except PreconditionError as exc:
        raise ConfigError(str(exc)) from exc


def _boolean(value) -> bool:
    if isinstance(value, bool):
        return value
    states = configparser.ConfigParser.BOOLEAN_STATES
    if str(value).lower() not in states:
        raise ConfigError(f"Not a boolean: {value!r}.")
    return states[str(value).lower()]


def _optional_int(value) -> Optional[int]:
    if value is None or str(value).lower() in ("", "none"):
        return None
    return int(value)


# keys accepted in a config file, with their parsers
_FILE_KEYS = {
    "p_min": int,
    "p_max": int,
    "j": _rationals,
    "a": _rationals,
    "random": _optional_int,
    "seed": int,
    "l": int,
    "precision": int,
    "format": str,
    "output": str,
    "workers": int,
    "bound": int,
    "m_max": int,
    "degree_cap": _optional_int,
    "timing": _boolean,
}


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run needs.

    ``precision=None`` means unset: suites then use k = 1 and the supercongruence check k = 2.
    ``format=None`` defers to the sink (human on a terminal, json otherwise).
    """

    command: Optional[str] = None
    p: Optional[int] = None
    p_min: int = 5
    p_max: int = 37
    j: Tuple[Fraction, ...] = ()
    a: Tuple[Fraction, ...] = ()
    random: Optional[int] = None
    seed: int = 0
    l: int = 1
    precision: Optional[int] = None
    format: Optional[str] = None
    output: str = "-"
    workers: int = 1
    bound: int = DEFAULT_POINT_BOUND
    m_max: int = 200
    degree_cap: Optional[int] = None
    timing: bool = False
    suite: Optional[str] = None
    chain: bool = False

    def validate(self) -> "RunConfig":
        if self.p_min < 5:
            raise ConfigError(f"p_min must be at least 5, got {self.p_min}.")
        if self.p_min > self.p_max:
            raise ConfigError(f"Empty prime range [{self.p_min}, {self.p_max}].")
        if self.p is not None and self.p < 5:
            raise ConfigError(f"p must be at least 5, got {self.p}.")
        if self.precision not in (None, 1, 2):
            raise ConfigError(f"Precision must be 1 or 2, got {self.precision}.")
        if self.l not in (1, 2):
            raise ConfigError(f"l must be 1 or 2, got {self.l}.")
        if not 1 <= self.bound <= MAX_BOUND:
            raise ConfigError(f"Point-count bound must lie in [1, {MAX_BOUND}], got {self.bound}.")
        if self.workers < 1:
            raise ConfigError(f"Need at least one worker, got {self.workers}.")
        if self.format is not None and self.format not in FORMATS:
            raise ConfigError(
                f"Format {self.format} not recognized. Currently supported formats are: {list(FORMATS)}"
            )
        if self.random is not None and self.random < 1:
            raise ConfigError(f"--random needs a positive count, got {self.random}.")
        if self.command == "supercongruence" and self.precision == 1:
            raise ConfigError("The supercongruence check works modulo p^2 and needs precision 2.")
        return self

    def j_policy(self) -> JPolicy:
        if self.random is not None:
            return JPolicy.random(self.random, self.seed)
        if self.j:
            return JPolicy.explicit(self.j)
        return JPolicy.all_residues()

    def suite_params(self) -> SuiteParams:
        kwargs: Dict[str, Any] = {}
        if self.a:
            kwargs["a_values"] = self.a
        return SuiteParams.for_range(
            self.p_min,
            self.p_max,
            levels=tuple(range(1, self.l + 1)),
            j0_values=self.j or None,
            m_max=self.m_max,
            degree_cap=self.degree_cap,
            bound=self.bound,
            precision=self.precision or 1,
            timing=self.timing,
            **kwargs,
        )


def read_config_file(path: str) -> Dict[str, Any]:
    """key = value lines, with or without a section header."""
    try:
        with open(path) as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"Cannot read config file {path}: {exc}") from exc
    if not text.lstrip().startswith("["):
        text = "[trunc_hgm]\n" + text
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(f"Malformed config file {path}: {exc}") from exc

    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            key = key.replace("-", "_")
            if key not in _FILE_KEYS:
                raise ConfigError(
                    f"Config key {key} not recognized. Currently supported keys are: {list(_FILE_KEYS.keys())}"
                )
            try:
                values[key] = _FILE_KEYS[key](raw)
            except ValueError as exc:
                raise ConfigError(f"Bad value for {key} in {path}: {raw!r}") from exc
    return values


def resolve_config(
    flags: Mapping[str, Any],
    config_path: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Merge the layers; ``flags`` entries that are None count as unset."""
    environ = os.environ if environ is None else environ
    layered: Dict[str, Any] = {}
    if config_path:
        layered.update(read_config_file(config_path))
        logger.info("read config file %s", config_path)
    if environ.get(WORKERS_ENV):
        try:
            layered["workers"] = int(environ[WORKERS_ENV])
        except ValueError as exc:
            raise ConfigError(f"{WORKERS_ENV} must be an integer.") from exc

    known = {f.name for f in fields(RunConfig)}
    for key, value in flags.items():
        if key in known and value is not None:
            layered[key] = value
    for key in ("j", "a"):
        if key in layered:
            layered[key] = _rationals(layered[key])
    return replace(RunConfig(), **layered).validate()
