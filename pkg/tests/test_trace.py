import json
import math

import pytest
from hypothesis import given, strategies as st

from intelliad import trace as tr
from intelliad.errors import (EmptyRunList, InvalidSession, MalformedLine, NonMonotonicTimestamp,
                              ZeroDuration)
from intelliad.power import CpuPowerBin, PowerModel, WifiPowerParams, cpu_power, wifi_power

TOP = """t_s,pid,rss_kb,cpu_pct
# sampled once a second
1,4242,50000,2.0
1,999,10,50

2,4242,52000,4.0
"""


def test_parse_top_filters_pid_and_skips_noise():
    samples = tr.parse_top_log(TOP, pid=4242)
    assert [s.rss_kb for s in samples] == [50000, 52000]
    assert len(tr.parse_top_log(TOP)) == 3


def test_malformed_line_reports_physical_line():
    with pytest.raises(MalformedLine) as exc:
        tr.parse_top_log("1,1,10,2\n\n2,1,abc,2\n")
    assert exc.value.line_no == 3


def test_non_monotonic():
    with pytest.raises(NonMonotonicTimestamp) as exc:
        tr.parse_packet_log("1.0,in,10\n0.5,out,10\n")
    assert exc.value.line_no == 2


def test_packet_direction_checked():
    with pytest.raises(MalformedLine):
        tr.parse_packet_log("1.0,sideways,10\n")


def test_cpu_pct_range():
    with pytest.raises(MalformedLine):
        tr.parse_top_log("1,1,10,101\n")


@given(st.lists(st.tuples(st.floats(0, 1e4, allow_nan=False), st.integers(1, 10 ** 6),
                          st.booleans()), max_size=40))
def test_packet_round_trip(rows):
    rows = sorted(rows)
    pkts = [tr.PacketRecord(t, tr.Direction.IN if d else tr.Direction.OUT, b) for t, b, d in rows]
    assert tr.parse_packet_log(tr.format_packet_log(pkts)) == pkts


def _session(top=(), packets=(), proc=(), duration=10.0):
    return tr.MeasurementSession("s", duration, list(top), list(packets), list(proc))


def test_cost_vector_hand_values():
    s = _session(
        top=[tr.TopSample(1, 1, 100, 2.0), tr.TopSample(2, 1, 200, 4.0)],
        packets=[tr.PacketRecord(1, tr.Direction.IN, 300), tr.PacketRecord(2, tr.Direction.OUT, 100)],
        proc=[tr.ProcSample(1, 10, 245000), tr.ProcSample(2, 12, 384000)],
    )
    cv = tr.compute_cost_vector(s)
    assert cv.mem_rss_avg_kb == 150
    assert cv.cpu_util_avg_pct == 3.0
    assert cv.thread_count_avg == 11
    assert cv.total_bytes == 400
    assert cv.packet_count == 2
    assert cv.avg_packet_rate_pps == 0.2
    assert cv.avg_cpu_freq_khz == 314500
    assert cv.warnings == ()


def test_cost_vector_missing_streams_warn():
    cv = tr.compute_cost_vector(_session(packets=[tr.PacketRecord(1, tr.Direction.IN, 5)]))
    assert len(cv.warnings) == 2
    assert cv.mem_rss_avg_kb == 0


def test_cost_vector_errors():
    with pytest.raises(ZeroDuration):
        tr.compute_cost_vector(_session(top=[tr.TopSample(0, 1, 1, 1)], duration=0))
    with pytest.raises(InvalidSession):
        tr.compute_cost_vector(_session())


def test_estimate_power_adds_branches():
    model = PowerModel(WifiPowerParams(1.2, 238.7, 0.8, 247.0, 25),
                       (CpuPowerBin(245000, 201.0, 35.1),))
    cv = tr.CostVector(cpu_util_avg_pct=50.0, avg_packet_rate_pps=5.0, avg_cpu_freq_khz=245000)
    out = tr.estimate_power(cv, model)
    assert out.power_mw == pytest.approx(1.2 * 5 + 238.7 + 201.0 * 0.5 + 35.1)
    assert out.power_mw == wifi_power(5.0, model.wifi) + cpu_power(0.5, 245000, model)


def test_separate_costs_signed_and_undefined():
    ad = tr.CostVector(mem_rss_avg_kb=110, cpu_util_avg_pct=1.0, total_bytes=50)
    proto = tr.CostVector(mem_rss_avg_kb=100, cpu_util_avg_pct=2.0, total_bytes=0)
    sep = tr.separate_costs(ad, proto)
    assert sep.delta.mem_rss_avg_kb == 10
    assert sep.delta.cpu_util_avg_pct == -1.0
    assert sep.increase_rate["mem_rss_avg_kb"] == pytest.approx(0.1)
    assert sep.increase_rate["cpu_util_avg_pct"] == -0.5
    assert sep.increase_rate["total_bytes"] is None
    assert "total_bytes" in sep.undefined
    assert any("total_bytes" in w for w in sep.delta.warnings)


def test_self_baseline_all_zero():
    cv = tr.CostVector(*range(1, 9))
    sep = tr.separate_costs(cv, cv)
    assert all(r == 0 for r in sep.increase_rate.values())


def test_aggregate_runs_mean_and_warning():
    runs = [tr.CostVector(mem_rss_avg_kb=v) for v in (1.0, 2.0, 3.0)]
    agg = tr.aggregate_runs(runs, n_expected=4)
    assert agg.mem_rss_avg_kb == 2.0
    assert agg.warnings
    assert tr.aggregate_runs(runs, n_expected=3).warnings == ()
    with pytest.raises(EmptyRunList):
        tr.aggregate_runs([])


def test_aggregate_uses_exact_sum():
    runs = [tr.CostVector(total_bytes=v) for v in (1e16, 1.0, -1e16, 1.0)]
    assert tr.aggregate_runs(runs).total_bytes == 0.5


def test_load_session_missing_log(tmp_path):
    (tmp_path / "top.csv").write_text("1,1,1,1\n")
    (tmp_path / "manifest.json").write_text(json.dumps(
        {"label": "x", "duration_s": 5, "top_log": "top.csv", "packet_log": "packets.csv",
         "proc_log": "proc.csv"}))
    with pytest.raises(InvalidSession, match="packet_log"):
        tr.load_session(tmp_path / "manifest.json")


def test_load_session_sample_beyond_duration(tmp_path):
    for name in ("top.csv", "packets.csv", "proc.csv"):
        (tmp_path / name).write_text("")
    (tmp_path / "top.csv").write_text("9,1,1,1\n")
    (tmp_path / "manifest.json").write_text(json.dumps(
        {"label": "x", "duration_s": 5, "top_log": "top.csv", "packet_log": "packets.csv",
         "proc_log": "proc.csv", "scheme": "A1"}))
    with pytest.raises(InvalidSession):
        tr.load_session(tmp_path / "manifest.json")


def test_fmt_num_round_trips():
    for x in (0.1, 1e-7, 3.0, 123456.789, 2 ** 53):
        assert float(tr.fmt_num(x)) == x
    assert tr.fmt_num(3.0) == "3"
    assert math.isclose(float(tr.fmt_num(1 / 3)), 1 / 3, rel_tol=0)
