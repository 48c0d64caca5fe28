import json
import math
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from interp_couples.report import SCHEMA, Record, Report, dumps, emit, emit_table, load_report, margin, summarize


def rec(label, value, bound, theta=None, index=None):
    return Record.compare(label, value, bound, 1e-9, theta=theta, index=index)


def test_margin():
    assert margin(1.0, 2.0) == 0.5
    assert margin(3.0, 2.0) == -0.5
    assert margin(0.0, 0.0) == 0.0
    assert margin(1e-30, 0.0) == -math.inf


def test_compare_tolerance():
    assert rec("a", 1.0 + 1e-10, 1.0).passed
    assert not rec("a", 1.0 + 1e-8, 1.0).passed
    assert not rec("a", 1e-300, 0.0).passed


def test_summarize_single():
    r = rec("a", 1.0, 4.0)
    s = summarize([r])
    assert s["worst_margin"] == r.margin == 0.75
    assert s["count"] == 1 and s["passed"] == 1 and s["failed"] == 0


def test_summarize_mixed():
    recs = [rec("a", 1.0, 2.0, 0.5, 0), rec("b", 3.0, 2.0, 0.5, 1), rec("c", 0.0, 1.0, 0.3, 2)]
    s = summarize(recs)
    assert (s["count"], s["passed"], s["failed"]) == (3, 2, 1)
    assert s["worst_margin"] == -0.5 and s["worst_label"] == "b" and s["worst_index"] == 1


def test_summarize_empty():
    with pytest.raises(ValueError):
        summarize([])


@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0.1, 10)), min_size=1, max_size=40), st.randoms())
def test_summary_is_order_independent(pairs, rnd):
    recs = [rec(f"r{i % 3}", v, b, theta=0.5, index=i) for i, (v, b) in enumerate(pairs)]
    shuffled = recs[:]
    rnd.shuffle(shuffled)
    a, b = summarize(recs), summarize(shuffled)
    for key in ("count", "passed", "failed", "worst_margin", "worst_label", "worst_index"):
        assert a[key] == b[key]
    assert a["mean_margin"] == b["mean_margin"]


def sample_report():
    recs = [rec("theorem1", 0.1 * k, 1.0, theta=0.5, index=k) for k in range(7)]
    s = summarize(recs)
    s["M0"] = 1.0 / 3.0
    return Report("theorem1", recs, s, {"map": "conv(x,x)", "thetas": [0.1, 0.5]})


def test_json_round_trip(tmp_path):
    rep = sample_report()
    path = tmp_path / "out.json"
    emit(rep, "json", path)
    back = load_report(path)
    assert back.to_dict() == rep.to_dict()
    data = json.loads(path.read_text())
    assert data["schema"] == SCHEMA
    assert list(data) == ["schema", "kind", "meta", "summary", "records"]


def test_csv_row_count(tmp_path):
    rep = sample_report()
    path = tmp_path / "out.csv"
    emit(rep, "csv", path)
    lines = path.read_text().splitlines()
    assert len(lines) == len(rep.records) + 1
    assert lines[0] == "label,value,bound,margin,passed,theta,index,norm_x"


def test_emit_table(tmp_path):
    rows = [{"t": 0.5, "K": 1 / 3}, {"t": 1.0, "K": 2.0}]
    emit_table(rows, "csv", tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text() == "t,K\n0.5,0.33333333333333331\n1.0,2.0\n"


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_serialization_round_trips(v):
    assert float(json.loads(dumps(v))) == v
    assert json.loads(dumps({"v": v}))["v"] == v


def test_seventeen_digits_and_numpy_scalars():
    text = dumps({"a": np.float64(0.1), "b": np.int64(3), "c": np.bool_(True), "d": np.array([1.0, 2.5])})
    assert '"a": 0.10000000000000001' in text
    data = json.loads(text)
    assert data == {"a": 0.1, "b": 3, "c": True, "d": [1.0, 2.5]}


def test_atomic_write_leaves_no_temp_files(tmp_path):
    emit(sample_report(), "json", tmp_path / "r.json")
    assert os.listdir(tmp_path) == ["r.json"]


def test_io_error_names_the_path(tmp_path):
    target = tmp_path / "missing" / "r.json"
    with pytest.raises(OSError, match="missing"):
        emit(sample_report(), "json", target)


def test_rejects_unknown_schema(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema": "other/9", "kind": "x"}))
    with pytest.raises(ValueError):
        load_report(path)


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        emit(sample_report(), "xml", tmp_path / "r.xml")
