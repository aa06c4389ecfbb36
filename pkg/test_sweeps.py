"""
Tests for the sweep runner and its reports.
"""

import sys

import pandas as pd
import pytest

from frobenius_toolkit.sweeps.sweep_runner import (
    REPORT_COLUMNS,
    SWEEPS,
    run_sweep,
    save_sweep_report,
)
from frobenius_toolkit.utils.helpers import load_report_file


def _all_passed(df):
    return bool(df["passed"].all())


def test_report_shape():
    df = run_sweep("meander", 5)
    assert list(df.columns) == REPORT_COLUMNS
    assert len(df) == sum(n - 1 for n in range(2, 6))


def test_frobenius_sweep():
    df = run_sweep("frobenius", 6)
    assert _all_passed(df)
    row = df[(df["n"] == 6) & (df["m"] == 4)].iloc[0]
    assert row["expected"] == False  # noqa: E712
    assert row["detail"] == "sampled index 1"


def test_prime_sweep():
    df = run_sweep("prime", 4)
    assert _all_passed(df)
    assert set(df[df["observed"] == True]["m"]) == {1, 2, 3}  # noqa: E712


def test_subprime_sweep_expectations():
    df = run_sweep("subprime", 12)
    assert len(df) == 55
    assert (df["m"] >= 2).all()
    assert _all_passed(df)
    expected = {(int(r.n), int(r.m)): bool(r.expected) for r in df.itertuples()}
    assert expected[(3, 2)] and expected[(5, 3)] and expected[(6, 5)]
    assert not expected[(6, 4)] and not expected[(6, 2)]
    row = df[(df["n"] == 3) & (df["m"] == 2)].iloc[0]
    assert row["passed"] == True  # noqa: E712


def test_root_meander_trace_and_rebuild_sweeps():
    for name in ("root", "meander", "trace", "rebuild"):
        assert _all_passed(run_sweep(name, 7)), name


def test_product_sweep_rows():
    df = run_sweep("product", 4)
    assert set(zip(df["n"], df["m"])) == {(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (4, 4)}
    row = df[(df["n"] == 3) & (df["m"] == 3)].iloc[0]
    assert row["expected"] == 1


def test_progression_sweep_reports_every_coprime_cell():
    df = run_sweep("progression", 6)
    assert len(df) == 11
    row = df[(df["n"] == 5) & (df["m"] == 2)].iloc[0]
    assert "1 -> 3 -> 2 -> 4" in row["detail"]
    assert "removed 3->2" in row["detail"]


def test_unknown_sweep_and_bad_bound():
    with pytest.raises(ValueError):
        run_sweep("nonsense", 5)
    with pytest.raises(ValueError):
        run_sweep("meander", 1)
    assert set(SWEEPS) >= {"frobenius", "subprime", "prime", "product"}


def test_save_and_load_csv(tmp_path):
    df = run_sweep("root", 6)
    path = save_sweep_report(df, "root", str(tmp_path / "reports" / "root.csv"))
    assert path is not None
    loaded = load_report_file(path)
    assert isinstance(loaded, pd.DataFrame)
    assert list(loaded.columns) == REPORT_COLUMNS
    assert len(loaded) == len(df)
    assert loaded["passed"].all()


def test_default_report_location(tmp_path, monkeypatch):
    monkeypatch.setenv("FROBENIUS_OUTPUT_DIR", str(tmp_path))
    path = save_sweep_report(run_sweep("meander", 4), "meander")
    assert path.startswith(str(tmp_path))
    assert path.endswith(".xlsx")
    assert load_report_file(path) is not None


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
