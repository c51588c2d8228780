import inspect

import pandas as pd

from trunc_hgm.verify.suites import suite_registry


def _format_lists(df):
    """Formats lists found in the dataframe."""

    def format_element(x):
        return ", ".join(map(str, x)) if isinstance(x, list) else x

    return df.map(format_element)


def find_suite(suite_id=None, kind=None, section=None, statement=None, field=None):
    """Return suite metadata in a dataframe filtered by the argument fields.

    Every given field is matched as a substring, e.g. ``find_suite(suite_id="5.")``.
    """
    all_meta = []
    for sid, cls in suite_registry().items():
        suite = cls()
        all_meta.append({"suite_id": sid, "name": cls.__name__} | suite.META)
    df = pd.DataFrame(all_meta)

    bound_args = inspect.signature(find_suite).bind(
        suite_id=suite_id,
        kind=kind,
        section=section,
        statement=statement,
        field=field,
    )
    filter_values = {k: v for k, v in bound_args.arguments.items() if v is not None}

    if not filter_values:
        return _format_lists(df)
    mask = pd.Series(True, index=df.index)
    for k, v in filter_values.items():
        mask &= df[k].fillna("").str.contains(v, regex=False, na=False)
    return _format_lists(df[mask])
