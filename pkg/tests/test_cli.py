import csv
import json
import shutil

import pytest

from intelliad import cli, simdevice as sd

from conftest import DEMO, REPO

GOLDEN = REPO / "tests" / "golden"
STAGES = ("inspect", "simulate", "profile", "reviews", "correlate", "report")


def run_demo(out):
    for stage in STAGES:
        assert cli.main([stage, "--config", str(DEMO / "config.json"), "--out", str(out)]) == 0, stage
    return out


@pytest.fixture(scope="session")
def demo_out(tmp_path_factory):
    return run_demo(tmp_path_factory.mktemp("demo") / "out")


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_cfg(tmp_path, **kw):
    p = tmp_path / "config.json"
    p.write_text(json.dumps(kw))
    return str(p)


# inspect

def test_inspect_single_app(tmp_path):
    cfg = write_cfg(tmp_path, out="out")
    assert cli.main(["inspect", "--config", cfg, str(DEMO / "apps" / "app_a7")]) == 0
    summary = rows(tmp_path / "out" / "inspect" / "schemes_summary.csv")
    assert len(summary) == 1 and summary[0]["ad_count"] == "4"
    report = json.loads((tmp_path / "out" / "inspect" / "com.demo.scheme7.json").read_text())
    assert report["ad_count"] == 4


def test_inspect_empty(tmp_path):
    cfg = write_cfg(tmp_path, out="out")
    assert cli.main(["inspect", "--config", cfg]) == 0
    assert (tmp_path / "out" / "inspect" / "schemes_summary.csv").read_text().count("\n") == 1


def test_inspect_unreadable(tmp_path, capsys):
    cfg = write_cfg(tmp_path, out="out")
    assert cli.main(["inspect", "--config", cfg, str(tmp_path / "nope")]) == 1
    assert "nope" in capsys.readouterr().err


def test_config_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("INTELLIAD_CONFIG", write_cfg(tmp_path, out="envout"))
    assert cli.main(["inspect"]) == 0
    assert (tmp_path / "envout" / "inspect" / "schemes_summary.csv").exists()


def test_bad_config_is_fatal(tmp_path, capsys):
    assert cli.main(["inspect", "--config", write_cfg(tmp_path, bogus=1)]) == 2
    assert "bogus" in capsys.readouterr().err


# profile

def _sessions(tmp_path, lift):
    base = sd.SessionPlan("base", cpu_pct=2.0)
    m_base, _ = sd.generate_session(base, tmp_path / "t" / "base", {"role": "baseline"})
    m_ad, _ = sd.generate_session(base.scaled("A1", {"cpu_pct": lift}), tmp_path / "t" / "A1",
                                  {"scheme": "A1"})
    return m_base, m_ad


def _power_model(tmp_path):
    p = tmp_path / "pm.json"
    shutil.copy(DEMO / "power_model.json", p)
    return "pm.json"


def test_profile_planted_lift(tmp_path):
    m_base, m_ad = _sessions(tmp_path, 1.1)
    cfg = write_cfg(tmp_path, out="out", power_model=_power_model(tmp_path), runs_expected=1)
    assert cli.main(["profile", "--config", cfg, str(m_ad), "--baseline", str(m_base)]) == 0
    rate = rows(tmp_path / "out" / "profile" / "increase_rates.csv")[0]
    assert float(rate["cpu_util_avg_pct"]) == pytest.approx(0.10, abs=1e-6)


def test_profile_self_baseline(tmp_path):
    m_base, _ = _sessions(tmp_path, 1.0)
    cfg = write_cfg(tmp_path, out="out", power_model=_power_model(tmp_path), runs_expected=1)
    # the same session once as ad app, once as prototype
    other = tmp_path / "t" / "copy"
    shutil.copytree(m_base.parent, other)
    meta = json.loads((other / "manifest.json").read_text())
    meta.update(role="ad", scheme="A1")
    (other / "manifest.json").write_text(json.dumps(meta))
    assert cli.main(["profile", "--config", cfg, str(other / "manifest.json"),
                     "--baseline", str(m_base)]) == 0
    rate = rows(tmp_path / "out" / "profile" / "increase_rates.csv")[0]
    assert all(float(rate[k]) == 0 for k in rate if k != "scheme")


def test_profile_missing_log_continues(tmp_path, capsys):
    m_base, m_ad = _sessions(tmp_path, 1.1)
    broken = tmp_path / "t" / "broken"
    shutil.copytree(m_ad.parent, broken)
    (broken / "proc.csv").unlink()
    cfg = write_cfg(tmp_path, out="out", power_model=_power_model(tmp_path), runs_expected=1)
    code = cli.main(["profile", "--config", cfg, str(m_ad), str(broken / "manifest.json"),
                     "--baseline", str(m_base)])
    assert code == 1
    errs = rows(tmp_path / "out" / "profile" / "errors.csv")
    assert len(errs) == 1 and "broken" in errs[0]["manifest"]
    assert len(rows(tmp_path / "out" / "profile" / "sessions.csv")) == 2
    assert "proc" in capsys.readouterr().err


# correlate

def _stage_files(out, measured_schemes, rated_schemes):
    (out / "profile").mkdir(parents=True)
    (out / "reviews").mkdir(parents=True)
    with open(out / "profile" / "deltas.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scheme", "cpu_util_avg_pct", "total_bytes", "power_mw"])
        for i, s in enumerate(measured_schemes):
            w.writerow([s, i, 100 * i, (i * 7) % 5])
    with open(out / "reviews" / "cost_ratings.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scheme", "cost_type", "avg_rating", "n_reviews"])
        for i, s in enumerate(rated_schemes):
            for c in ("MemCpu", "Traffic", "Battery"):
                w.writerow([s, c, 1 + (i % 3) / 2, 1])


def test_correlate_identical_sets(tmp_path):
    _stage_files(tmp_path / "out", ["A1", "A2", "A3"], ["A1", "A2", "A3"])
    assert cli.main(["correlate", "--config", write_cfg(tmp_path, out="out")]) == 0
    assert rows(tmp_path / "out" / "correlate" / "warnings.csv") == []
    corr = {r["cost_type"]: r for r in rows(tmp_path / "out" / "correlate" / "correlations.csv")}
    assert corr["MemCpu"]["n"] == "3"


def test_correlate_disjoint_sets(tmp_path):
    _stage_files(tmp_path / "out", ["A1", "A2"], ["A3", "A4"])
    assert cli.main(["correlate", "--config", write_cfg(tmp_path, out="out")]) == 0
    assert len(rows(tmp_path / "out" / "correlate" / "warnings.csv")) == 4
    corr = rows(tmp_path / "out" / "correlate" / "correlations.csv")
    assert all(r["pearson"] == "undefined" and r["n"] == "0" for r in corr)


# demo workspace

def test_demo_inspect_matches_schemes(demo_out):
    summary = {r["scheme"]: r for r in rows(demo_out / "inspect" / "schemes_summary.csv")}
    assert summary["A7"]["ad_count"] == "4"
    assert summary["A7"]["networks"] == "Amazon;MoPub"
    assert summary["A10"]["Interstitial"] == "1"


def test_demo_report_matches_golden(demo_out):
    golden = sorted(p.name for p in (GOLDEN / "report").iterdir())
    assert golden == sorted(p.name for p in (demo_out / "report").iterdir())
    for name in golden:
        assert (demo_out / "report" / name).read_text() == (GOLDEN / "report" / name).read_text(), name


def test_stage_rerun_idempotent(demo_out):
    before = {p: p.read_bytes() for p in (demo_out / "reviews").iterdir()}
    assert cli.main(["reviews", "--config", str(DEMO / "config.json"), "--out", str(demo_out)]) == 0
    assert {p: p.read_bytes() for p in (demo_out / "reviews").iterdir()} == before


def test_seed_override_changes_traces(tmp_path):
    cfg = str(DEMO / "config.json")
    for seed in ("1", "2"):
        assert cli.main(["simulate", "--config", cfg, "--out", str(tmp_path / seed),
                         "--seed", seed, "--runs", "1"]) == 0
    a = (tmp_path / "1" / "traces" / "A1" / "run1" / "top.csv").read_bytes()
    b = (tmp_path / "2" / "traces" / "A1" / "run1" / "top.csv").read_bytes()
    assert a != b
