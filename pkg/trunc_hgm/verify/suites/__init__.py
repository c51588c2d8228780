import importlib
import inspect
import pkgutil
from typing import Dict, List, Optional, Type

from trunc_hgm.errors import ConfigError
from trunc_hgm.reports import CongruenceReport
from trunc_hgm.verify.suites.base import Suite, SuiteParams

from . import lifting, models, twists, vanishing


def _order_key(suite_id: str):
    return tuple((0, int(x), "") if x.isdigit() else (1, 0, x) for x in suite_id.split("."))


def suite_registry() -> Dict[str, Type[Suite]]:
    """Every Suite subclass defined in this package, keyed by suite id in reading order."""
    found = {}
    for _, mod_name, _ in pkgutil.walk_packages(__path__, __name__ + "."):
        if mod_name.endswith(".base"):
            continue
        module = importlib.import_module(mod_name)
        for _, obj in inspect.getmembers(module, inspect.isclass):
            if issubclass(obj, Suite) and obj is not Suite and obj.__module__ == mod_name:
                found[obj.suite_id] = obj
    return {k: found[k] for k in sorted(found, key=_order_key)}


def get_suite(suite_id: str) -> Suite:
    registry = suite_registry()
    if suite_id not in registry:
        raise ConfigError(
            f"Suite {suite_id} not recognized. Currently supported suites are: {list(registry.keys())}"
        )
    return registry[suite_id]()


def run_lemma_suite(
    suite_id: str, params: Optional[SuiteParams] = None, workers: int = 1
) -> List[CongruenceReport]:
    """One report per instance of the suite's parameter grid."""
    return get_suite(suite_id).run(params, workers)


def run_all_suites(
    params: Optional[SuiteParams] = None, workers: int = 1
) -> List[CongruenceReport]:
    reports = []
    for suite_id in suite_registry():
        reports.extend(run_lemma_suite(suite_id, params, workers))
    return reports
