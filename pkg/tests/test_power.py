import json
import random

import pytest

from intelliad import power as pw
from intelliad.errors import (DegenerateDesign, InvalidPowerModel, NegativeRate, NoFrequencyBin,
                              UtilizationOutOfRange)


@pytest.fixture
def model():
    return pw.PowerModel(
        pw.WifiPowerParams(1.2, 238.7, 0.8, 247.0, 25),
        (pw.CpuPowerBin(245000, 201.0, 35.1), pw.CpuPowerBin(384000, 257.2, 36.1),
         pw.CpuPowerBin(998400, 559.5, 45.6)))


def test_wifi_branches(model):
    w = model.wifi
    assert pw.wifi_power(0, w) == 238.7
    assert pw.wifi_power(10, w) == pytest.approx(1.2 * 10 + 238.7)
    assert pw.wifi_power(30, w) == pytest.approx(0.8 * 30 + 247.0)


def test_wifi_threshold_takes_low_branch(model):
    assert pw.wifi_power(25, model.wifi) == pytest.approx(1.2 * 25 + 238.7)


def test_wifi_negative_rate(model):
    with pytest.raises(NegativeRate):
        pw.wifi_power(-0.1, model.wifi)


def test_cpu_nearest_bin(model):
    assert pw.cpu_power(0.5, 245000, model) == pytest.approx(201.0 * 0.5 + 35.1)
    assert pw.cpu_power(1.0, 300000, model) == pytest.approx(201.0 + 35.1)
    assert pw.cpu_power(1.0, 2_000_000, model) == pytest.approx(559.5 + 45.6)


def test_cpu_tie_goes_to_lower_bin(model):
    mid = (245000 + 384000) / 2
    assert model.nearest_bin(mid).freq_khz == 245000


def test_cpu_utilization_range(model):
    with pytest.raises(UtilizationOutOfRange):
        pw.cpu_power(1.5, 245000, model)


def test_no_bins():
    m = pw.PowerModel(pw.WifiPowerParams(1, 1, 1, 1, 1), ())
    with pytest.raises(NoFrequencyBin):
        m.nearest_bin(1000)


def test_frequencies_must_increase():
    with pytest.raises(InvalidPowerModel):
        pw.PowerModel(pw.WifiPowerParams(1, 1, 1, 1, 1),
                      (pw.CpuPowerBin(2, 1, 1), pw.CpuPowerBin(2, 1, 1)))


def test_load_round_trip(model, tmp_path):
    p = tmp_path / "pm.json"
    p.write_text(json.dumps(model.to_json()))
    assert pw.load_power_model(p) == model


def test_load_rejects_missing_fields(tmp_path):
    p = tmp_path / "pm.json"
    p.write_text(json.dumps({"wifi": {"beta_low": 1}, "cpu_bins": []}))
    with pytest.raises(InvalidPowerModel):
        pw.load_power_model(p)


def test_fit_linear_exact():
    fit = pw.fit_linear([pw.CalibrationSample(x, 3 * x - 2) for x in range(5)])
    assert fit.slope == pytest.approx(3)
    assert fit.intercept == pytest.approx(-2)
    assert fit.residual_stdev == pytest.approx(0, abs=1e-12)


def test_fit_linear_hand_computed():
    # y = 0, 1, 1, 3 at x = 0..3: slope 0.9, intercept -0.1,
    # residuals 0.1, 0.2, -0.7, 0.4 -> sum sq 0.7, stdev sqrt(0.7/3)
    fit = pw.fit_linear([(0, 0), (1, 1), (2, 1), (3, 3)])
    assert fit.slope == pytest.approx(0.9)
    assert fit.intercept == pytest.approx(-0.1)
    assert fit.residual_stdev == pytest.approx((0.7 / 3) ** 0.5)


def test_fit_linear_degenerate():
    with pytest.raises(DegenerateDesign):
        pw.fit_linear([(1, 2)])
    with pytest.raises(DegenerateDesign):
        pw.fit_linear([(1, 2), (1, 3)])


def test_fit_wifi_and_cpu_recover_coefficients():
    samples = [(p, 1.2 * p + 238.7) for p in range(0, 26)] + \
              [(p, 0.8 * p + 247.0) for p in range(26, 60)]
    params, _ = pw.fit_wifi(samples, 25)
    assert params.beta_low == pytest.approx(1.2)
    assert params.base_high == pytest.approx(247.0)
    rng = random.Random(1)
    by_freq = {f: [(u, a * u + b) for u in (rng.random() for _ in range(10))]
               for f, a, b in ((245000, 201.0, 35.1), (384000, 257.2, 36.1))}
    bins, stdev = pw.fit_cpu_bins(by_freq)
    assert [b.freq_khz for b in bins] == [245000, 384000]
    assert bins[1].beta_active == pytest.approx(257.2)
    assert stdev == pytest.approx(0, abs=1e-9)
