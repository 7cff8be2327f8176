"""Linear WiFi + CPU battery model and its least-squares calibration.

Units: power in mW, packet rate in packets/s, CPU utilization as a fraction
in [0, 1], frequencies in kHz.
"""

import bisect
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

from .errors import (DegenerateDesign, InvalidPowerModel, NegativeRate,
                     NoFrequencyBin, UtilizationOutOfRange)


@dataclass(frozen=True)
class WifiPowerParams:
    beta_low: float
    base_low: float
    beta_high: float
    base_high: float
    threshold_pps: float

    def __post_init__(self):
        vals = (self.beta_low, self.base_low, self.beta_high, self.base_high, self.threshold_pps)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidPowerModel("WiFi coefficients must be finite")
        if self.threshold_pps <= 0:
            raise InvalidPowerModel("threshold_pps must be positive")


@dataclass(frozen=True)
class CpuPowerBin:
    freq_khz: float
    beta_active: float
    beta_idle: float

    def __post_init__(self):
        if not self.freq_khz > 0:
            raise InvalidPowerModel(f"bin frequency must be positive, got {self.freq_khz}")
        if not (math.isfinite(self.beta_active) and math.isfinite(self.beta_idle)):
            raise InvalidPowerModel("CPU coefficients must be finite")


@dataclass(frozen=True)
class PowerModel:
    wifi: WifiPowerParams
    cpu_bins: tuple = ()

    def __post_init__(self):
        bins = tuple(self.cpu_bins)
        object.__setattr__(self, "cpu_bins", bins)
        freqs = [b.freq_khz for b in bins]
        if any(nxt <= cur for cur, nxt in zip(freqs, freqs[1:])):
            raise InvalidPowerModel("cpu_bins frequencies must be strictly increasing")

    def nearest_bin(self, freq_khz):
        """Bin whose frequency is closest to freq_khz; ties go to the lower bin."""
        if not self.cpu_bins:
            raise NoFrequencyBin("power model has no CPU frequency bins")
        freqs = [b.freq_khz for b in self.cpu_bins]
        i = bisect.bisect_left(freqs, freq_khz)
        if i == 0:
            return self.cpu_bins[0]
        if i == len(freqs):
            return self.cpu_bins[-1]
        lo, hi = self.cpu_bins[i - 1], self.cpu_bins[i]
        return hi if hi.freq_khz - freq_khz < freq_khz - lo.freq_khz else lo

    def to_json(self):
        w = self.wifi
        return {
            "wifi": {"beta_low": w.beta_low, "base_low": w.base_low, "beta_high": w.beta_high,
                     "base_high": w.base_high, "threshold_pps": w.threshold_pps},
            "cpu_bins": [{"freq_khz": b.freq_khz, "beta_active": b.beta_active,
                          "beta_idle": b.beta_idle} for b in self.cpu_bins],
        }


def parse_power_model(obj):
    try:
        wifi = WifiPowerParams(**{k: float(obj["wifi"][k]) for k in
                                  ("beta_low", "base_low", "beta_high", "base_high",
                                   "threshold_pps")})
        bins = [CpuPowerBin(float(b["freq_khz"]), float(b["beta_active"]), float(b["beta_idle"]))
                for b in obj["cpu_bins"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidPowerModel(f"bad power model config: {exc!r}") from exc
    if not bins:
        raise InvalidPowerModel("power model needs at least one CPU frequency bin")
    return PowerModel(wifi, tuple(sorted(bins, key=lambda b: b.freq_khz)))


def load_power_model(path):
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidPowerModel(f"cannot load power model {path}: {exc}") from exc
    return parse_power_model(obj)


def wifi_power(p, params):
    """Piecewise-linear WiFi power at packet rate p; p == threshold uses the low branch."""
    if p < 0:
        raise NegativeRate(f"packet rate must be nonnegative, got {p}")
    if p <= params.threshold_pps:
        return params.beta_low * p + params.base_low
    return params.beta_high * p + params.base_high


def cpu_power(u, freq_khz, model):
    if not 0.0 <= u <= 1.0:
        raise UtilizationOutOfRange(f"utilization must lie in [0, 1], got {u}")
    b = model.nearest_bin(freq_khz)
    return b.beta_active * u + b.beta_idle


def total_power(p, u, freq_khz, model):
    return wifi_power(p, model.wifi) + cpu_power(u, freq_khz, model)


class CalibrationSample(NamedTuple):
    x: float
    y: float


class LinearFit(NamedTuple):
    slope: float
    intercept: float
    residual_stdev: float

    def predict(self, x):
        return self.slope * x + self.intercept


def fit_linear(samples: Sequence[CalibrationSample]) -> LinearFit:
    """Ordinary least squares y = slope*x + intercept.

    residual_stdev is the sample (n-1) standard deviation of the residuals.
    """
    n = len(samples)
    if n < 2:
        raise DegenerateDesign(f"need at least 2 samples, got {n}")
    xs = [float(s[0]) for s in samples]
    ys = [float(s[1]) for s in samples]
    if not all(math.isfinite(v) for v in xs + ys):
        raise DegenerateDesign("calibration samples must be finite")
    x_mean = math.fsum(xs) / n
    y_mean = math.fsum(ys) / n
    sxx = math.fsum((x - x_mean) ** 2 for x in xs)
    if sxx == 0.0:
        raise DegenerateDesign("predictor is constant")
    sxy = math.fsum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    residuals = [y - (slope * x + intercept) for x, y in zip(xs, ys)]
    r_mean = math.fsum(residuals) / n
    stdev = math.sqrt(math.fsum((r - r_mean) ** 2 for r in residuals) / (n - 1))
    return LinearFit(slope, intercept, stdev)


def fit_wifi(samples, threshold_pps):
    """Fit both WiFi branches; samples are (packet rate, mW) pairs split at the threshold."""
    low = [s for s in samples if s[0] <= threshold_pps]
    high = [s for s in samples if s[0] > threshold_pps]
    lo, hi = fit_linear(low), fit_linear(high)
    return WifiPowerParams(lo.slope, lo.intercept, hi.slope, hi.intercept, threshold_pps), (lo, hi)


def fit_cpu_bins(samples_by_freq):
    """One CPU bin per frequency from (utilization, mW) samples.

    Returns the bins and the mean residual stdev of the fits, the figure used
    to judge whether a calibration is usable.
    """
    bins, fits = [], []
    for freq in sorted(samples_by_freq):
        fit = fit_linear(samples_by_freq[freq])
        bins.append(CpuPowerBin(float(freq), fit.slope, fit.intercept))
        fits.append(fit)
    if not bins:
        raise DegenerateDesign("no frequencies to fit")
    mean_stdev = math.fsum(f.residual_stdev for f in fits) / len(fits)
    return tuple(bins), mean_stdev
