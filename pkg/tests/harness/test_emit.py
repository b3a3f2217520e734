"""
test_emit.py

Tests for the CSV / JSON renderings of an ExperimentResult.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

import pytest
from estimators.sample_stats import Stat
from harness.emit import CSV_COLUMNS, emit, from_json, render, to_csv, to_json
from harness.experiment import ExperimentResult, ExperimentRow
from theory.normalizers import Regime


# ── Helpers ──────────────────────────────────────────────────────────────────

def _make_row(n: int = 100) -> ExperimentRow:
    return ExperimentRow(
        n=n,
        ks=0.0315,
        quantiles=(0.1, 0.2, 0.3, 0.4, 0.5),
        ref_quantiles=(0.11, 0.21, 0.31, 0.41, 0.51),
        a=10000.0,
        b=1e8,
        c=0.0,
        d=0.0,
        regime=Regime.I,
    )


def _make_result(rows=None) -> ExperimentResult:
    return ExperimentResult(
        model="pareto{alpha=0.5}",
        stat=Stat.T,
        regime=Regime.I,
        law="ratio{alpha=0.5,form=y2/y1^2}",
        seed=7,
        replications=1000,
        reference_draws=10000,
        rows=[_make_row()] if rows is None else rows,
    )


# ── CSV ───────────────────────────────────────────────────────────────────────

class TestCsv:
    def test_header(self):
        assert CSV_COLUMNS == [
            "n", "ks", "q05", "q25", "q50", "q75", "q95",
            "ref_q05", "ref_q25", "ref_q50", "ref_q75", "ref_q95",
            "a", "b", "c", "d", "regime",
        ]

    def test_empty_grid_is_header_only(self):
        assert to_csv(_make_result(rows=[])) == ",".join(CSV_COLUMNS) + "\n"

    def test_row_text(self):
        lines = to_csv(_make_result()).splitlines()
        assert len(lines) == 2
        assert lines[1] == ("100,0.0315,0.1,0.2,0.3,0.4,0.5,"
                            "0.11,0.21,0.31,0.41,0.51,10000.0,100000000.0,0.0,0.0,I")

    def test_floats_survive_exactly(self):
        value = 0.1 + 0.2
        row = ExperimentRow(**{**_make_row().__dict__, "ks": value})
        field = to_csv(_make_result(rows=[row])).splitlines()[1].split(",")[1]
        assert float(field) == value


# ── JSON ──────────────────────────────────────────────────────────────────────

class TestJson:
    def test_round_trip(self):
        result = _make_result(rows=[_make_row(10), _make_row(100)])
        assert from_json(to_json(result)) == result

    def test_document_fields(self):
        doc = json.loads(to_json(_make_result()))
        assert doc["stat"] == "T"
        assert doc["regime"] == "I"
        assert doc["quantile_levels"] == [0.05, 0.25, 0.5, 0.75, 0.95]
        assert doc["rows"][0]["regime"] == "I"

    def test_row_keys_mirror_csv_columns(self):
        doc = json.loads(to_json(_make_result()))
        row = doc["rows"][0]
        assert list(row) == CSV_COLUMNS
        assert row["q50"] == 0.3
        assert row["ref_q95"] == 0.51


# ── render / emit ─────────────────────────────────────────────────────────────

class TestEmit:
    def test_byte_stable(self):
        assert render(_make_result(), "json") == render(_make_result(), "json")

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render(_make_result(), "xml")

    def test_writes_file(self, tmp_path):
        path = tmp_path / "nested" / "out.csv"
        payload = emit(_make_result(), "csv", path)
        assert path.read_bytes() == payload
