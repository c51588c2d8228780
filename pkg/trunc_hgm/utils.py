import time
from typing import Any, Callable, Sequence, Tuple

import pandas as pd

from trunc_hgm.reports import FIELDS, CongruenceReport


def timed(fn: Callable, *args, **kwargs) -> Tuple[Any, float]:
    """Call fn and return its result with the elapsed wall time in milliseconds."""
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter() - start) * 1000.0


def reports_frame(reports: Sequence[CongruenceReport]) -> pd.DataFrame:
    """One row per report, columns in report field order."""
    records = [r.to_record() for r in reports]
    return pd.DataFrame(records, columns=list(FIELDS), dtype=object)


def _format_detail(detail) -> str:
    return ", ".join(f"{k}={v}" for k, v in detail.items())


def prettify(reports: Sequence[CongruenceReport]) -> str:
    """Aligned text table for terminals, with the diagnostics column appended."""
    if not reports:
        return "(no reports)"
    df = reports_frame(reports)
    df = df.where(df.notna(), "-")
    df["detail"] = [_format_detail(r.detail) or "-" for r in reports]
    return df.to_string(index=False)
