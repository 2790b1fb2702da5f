import numpy as np
import pytest

from som_atlas.ingest import DataTable, _observed_spec


def make_table(rows, names=None) -> DataTable:
    """DataTable from a plain matrix, with observed per-column ranges."""
    rows = np.asarray(rows, dtype=np.float64)
    if names is None:
        names = [f"a{i}" for i in range(rows.shape[1])]
    schema = tuple(_observed_spec(n, i, rows[:, i]) for i, n in enumerate(names))
    return DataTable(schema=schema, rows=rows)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
