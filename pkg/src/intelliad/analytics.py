"""Revenue arithmetic, cost summaries and cost/rating correlation."""

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

from .errors import (ConstantSeries, LengthMismatch, TooFewSchemes,
                     ZeroImpressions, ZeroRequests)
from .reviews import CostType

GIB = 1024 ** 3


@dataclass(frozen=True)
class RevenueInputs:
    impressions: float = 0.0
    ad_requests: float = 0.0
    total_earnings: float = 0.0
    n_user: float = 0.0      # average daily user sessions
    n_min: float = 0.0       # average minutes per session
    n_ad: float = 0.0        # ad impressions per minute

    def __post_init__(self):
        for name in ("impressions", "ad_requests", "total_earnings", "n_user", "n_min", "n_ad"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


def fill_rate(inputs):
    if inputs.ad_requests <= 0:
        raise ZeroRequests("fill rate needs at least one ad request")
    return inputs.impressions / inputs.ad_requests


def ecpm(inputs):
    """Earnings per 1,000 impressions."""
    if inputs.impressions <= 0:
        raise ZeroImpressions("eCPM needs at least one impression")
    return inputs.total_earnings / inputs.impressions * 1000


def ad_revenue(inputs, ecpm_value, fill_rate_value):
    return (inputs.n_user * inputs.n_min * inputs.n_ad / 1000) * ecpm_value * fill_rate_value


@dataclass(frozen=True)
class DataPlan:
    price: float
    quota_bytes: float

    def __post_init__(self):
        if not self.quota_bytes > 0:
            raise ValueError("data plan quota must be positive")

    @classmethod
    def from_gb(cls, price, gigabytes):
        """Plan quota in binary gigabytes (1 GB = 1024**3 bytes)."""
        return cls(price, gigabytes * GIB)


def traffic_dollar_cost(bytes_per_session, plan):
    return bytes_per_session / plan.quota_bytes * plan.price


def present(value, places):
    """Round for presentation only, half-to-even on the shortest decimal form."""
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_EVEN))


def pearson(x, y):
    """Sample Pearson correlation coefficient."""
    n = len(x)
    if n != len(y):
        raise LengthMismatch(f"series lengths differ: {n} vs {len(y)}")
    if n < 2:
        raise LengthMismatch("need at least two paired values")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [v - mx for v in x]
    dy = [v - my for v in y]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise ConstantSeries("correlation undefined for a constant series")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def sample_stdev(values):
    n = len(values)
    if n < 2:
        raise TooFewSchemes(f"standard deviation needs at least 2 values, got {n}")
    m = math.fsum(values) / n
    return math.sqrt(math.fsum((v - m) ** 2 for v in values) / (n - 1))


def scheme_stdev_summary(values):
    """{metric: {scheme: value}} -> {metric: sample stdev across schemes}.

    None values (undefined increase rates) are skipped.
    """
    out = {}
    for metric, per_scheme in values.items():
        vals = [v for v in per_scheme.values() if v is not None]
        out[metric] = sample_stdev(vals)
    return out


@dataclass
class SchemeObservation:
    scheme_id: str
    measured: dict = field(default_factory=dict)   # CostType -> measured cost
    ratings: dict = field(default_factory=dict)    # CostType -> average rating

    def __post_init__(self):
        for cost, v in self.measured.items():
            if not math.isfinite(v):
                raise ValueError(f"{self.scheme_id}: measured {cost} is not finite")
        for cost, v in self.ratings.items():
            if not 1.0 <= v <= 5.0:
                raise ValueError(f"{self.scheme_id}: rating {v} for {cost} outside [1, 5]")


# which profiler metric stands for each measured cost type
MEASURED_METRIC = {
    CostType.NUM_ADS: "ad_count",
    CostType.MEM_CPU: "cpu_util_avg_pct",
    CostType.TRAFFIC: "total_bytes",
    CostType.BATTERY: "power_mw",
}


def correlate_costs_vs_ratings(observations, strict=True):
    """Pearson coefficient of (measured cost, average rating) over schemes, per cost type.

    With strict=False a cost type whose correlation is undefined maps to None
    instead of raising.
    """
    out = {}
    for cost in CostType:
        pairs = [(o.measured[cost], o.ratings[cost]) for o in observations
                 if cost in o.measured and cost in o.ratings]
        try:
            out[cost] = pearson([p[0] for p in pairs], [p[1] for p in pairs])
        except (LengthMismatch, ConstantSeries):
            if strict:
                raise
            out[cost] = None
    return out
