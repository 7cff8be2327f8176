import json

import pytest

from intelliad import simdevice as sd
from intelliad import trace as tr
from intelliad.errors import InvalidPlan


def _cv(path):
    return tr.compute_cost_vector(tr.load_session(path))


def test_noiseless_round_trip(tmp_path):
    plan = sd.SessionPlan("p", cpu_pct=3.0, rss_kb=51234.5, packet_rate_pps=2.5)
    manifest, truth = sd.generate_session(plan, tmp_path)
    cv = _cv(manifest)
    plants = plan.plants()
    for m in tr.METRICS[:-1]:
        assert getattr(cv, m) == pytest.approx(getattr(plants, m), rel=1e-9), m
        assert getattr(cv, m) == pytest.approx(getattr(truth, m), rel=1e-12), m
    assert cv.cpu_util_avg_pct == 3.0


def test_cadence():
    top, packets, proc = sd.synthesize(sd.SessionPlan("p"))
    assert len(top) == 80
    assert top[0].t == 1 and top[-1].t == 80
    assert len(proc) == 2000
    assert len(packets) == 80


def test_same_seed_identical_bytes(tmp_path):
    plan = sd.SessionPlan("p", noise={"rss": 0.05, "cpu": 0.05, "bytes": 0.05}, seed=9)
    sd.generate_session(plan, tmp_path / "a")
    sd.generate_session(plan, tmp_path / "b")
    for name in ("top.csv", "packets.csv", "proc.csv", "manifest.json", "ground_truth.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_different_seed_differs():
    a = sd.synthesize(sd.SessionPlan("p", noise={"cpu": 0.1}, seed=1))[0]
    b = sd.synthesize(sd.SessionPlan("p", noise={"cpu": 0.1}, seed=2))[0]
    assert a != b


def test_noise_truncated_at_zero():
    top, _, _ = sd.synthesize(sd.SessionPlan("p", cpu_pct=0.5, noise={"cpu": 5.0}, seed=3))
    assert min(s.cpu_pct for s in top) >= 0


def test_paired_rates(tmp_path):
    base = sd.SessionPlan("base", cpu_pct=2.0, rss_kb=48000, thread_count=20,
                          packet_rate_pps=1.0, packet_bytes=500, cpu_freq_khz=400000)
    lifts = {"cpu_pct": 1.1, "rss_kb": 1.25, "thread_count": 1.5, "packet_bytes": 2.0,
             "cpu_freq_khz": 1.5}
    ad = base.scaled("ad", lifts)
    b = _cv(sd.generate_session(base, tmp_path / "b")[0])
    a = _cv(sd.generate_session(ad, tmp_path / "a")[0])
    rates = tr.separate_costs(a, b).increase_rate
    assert rates["cpu_util_avg_pct"] == pytest.approx(0.1, abs=1e-6)
    assert rates["mem_rss_avg_kb"] == pytest.approx(0.25, abs=1e-6)
    assert rates["thread_count_avg"] == pytest.approx(0.5, abs=1e-6)
    assert rates["total_bytes"] == pytest.approx(1.0, abs=1e-6)
    assert rates["avg_cpu_freq_khz"] == pytest.approx(0.5, abs=1e-6)
    assert rates["packet_count"] == 0


def test_ground_truth_file(tmp_path):
    plan = sd.SessionPlan("p", noise={"rss": 0.1}, seed=4)
    sd.generate_session(plan, tmp_path, extra_meta={"scheme": "A1"})
    gt = json.loads((tmp_path / "ground_truth.json").read_text())
    assert gt["plants"]["mem_rss_avg_kb"] == 50000
    assert gt["emitted_means"]["mem_rss_avg_kb"] == pytest.approx(
        _cv(tmp_path / "manifest.json").mem_rss_avg_kb, rel=1e-12)
    assert json.loads((tmp_path / "manifest.json").read_text())["scheme"] == "A1"


def test_poisson_mode_count_varies():
    counts = {len(sd.synthesize(sd.SessionPlan("p", poisson=True, packet_rate_pps=5, seed=s))[1])
              for s in range(5)}
    assert len(counts) > 1


@pytest.mark.parametrize("kwargs", [
    {"duration_s": 0}, {"duration_s": 70}, {"cpu_pct": 120}, {"in_fraction": 2},
    {"noise": {"gpu": 0.1}}, {"noise": {"cpu": -1}}, {"thread_count": 0},
])
def test_invalid_plans(kwargs):
    with pytest.raises(InvalidPlan):
        sd.SessionPlan("p", **kwargs).validate()
