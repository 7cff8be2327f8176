"""Synthetic measurement sessions with known ground truth.

A SessionPlan fixes per-metric plants (the expected values of the averages
the profiler computes) and relative Gaussian noise. Output is the three
canonical logs, a manifest and ground_truth.json, byte-identical for a
fixed seed.
"""

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._io import atomic_write_text
from .errors import InvalidPlan
from .trace import (CostVector, Direction, PacketRecord, ProcSample, TopSample,
                    format_packet_log, format_proc_log, format_top_log)

NOISE_KEYS = ("rss", "cpu", "threads", "bytes", "freq")


@dataclass(frozen=True)
class SessionPlan:
    label: str
    duration_s: float = 80.0
    op_interval_s: float = 20.0
    top_interval_s: float = 1.0
    proc_interval_s: float = 0.04
    rss_kb: float = 50000.0
    cpu_pct: float = 2.0
    thread_count: float = 20.0
    packet_rate_pps: float = 1.0
    packet_bytes: float = 500.0
    in_fraction: float = 0.6
    cpu_freq_khz: float = 1190400.0
    noise: dict = field(default_factory=dict)   # metric -> relative stddev
    poisson: bool = False
    pid: int = 4242
    seed: int = 0

    def validate(self):
        for name in ("duration_s", "op_interval_s", "top_interval_s", "proc_interval_s"):
            if not getattr(self, name) > 0:
                raise InvalidPlan(f"{name} must be positive")
        ops = self.duration_s / self.op_interval_s
        if abs(ops - round(ops)) > 1e-9:
            raise InvalidPlan(f"duration {self.duration_s} s is not a multiple of the "
                              f"{self.op_interval_s} s operation interval")
        for name in ("rss_kb", "cpu_pct", "packet_rate_pps"):
            if getattr(self, name) < 0:
                raise InvalidPlan(f"{name} must be nonnegative")
        if self.cpu_pct > 100:
            raise InvalidPlan("cpu_pct plant exceeds 100")
        if self.thread_count < 1 or self.cpu_freq_khz <= 0 or self.packet_bytes < 1:
            raise InvalidPlan("thread_count >= 1, cpu_freq_khz > 0 and packet_bytes >= 1 required")
        if not 0 <= self.in_fraction <= 1:
            raise InvalidPlan("in_fraction must lie in [0, 1]")
        for key, sd in self.noise.items():
            if key not in NOISE_KEYS:
                raise InvalidPlan(f"unknown noise key {key!r}")
            if not sd >= 0:
                raise InvalidPlan(f"noise stddev for {key} must be nonnegative")

    def scaled(self, label, lifts, seed=None):
        """Copy with plants multiplied by `lifts` ({field name: factor})."""
        changes = {k: getattr(self, k) * float(v) for k, v in lifts.items()}
        changes["label"] = label
        if seed is not None:
            changes["seed"] = seed
        return dataclasses.replace(self, **changes)

    def plants(self):
        """Expected cost vector (power not included), at the resolution the logs carry."""
        count = round(self.packet_rate_pps * self.duration_s)
        return CostVector(
            mem_rss_avg_kb=round(self.rss_kb, 3),
            cpu_util_avg_pct=round(min(self.cpu_pct, 100.0), 4),
            thread_count_avg=float(max(round(self.thread_count), 1)),
            total_bytes=float(count * max(round(self.packet_bytes), 1)),
            packet_count=float(count),
            avg_packet_rate_pps=count / self.duration_s,
            avg_cpu_freq_khz=float(max(round(self.cpu_freq_khz), 1)),
        )


def _grid(duration, interval):
    n = int(math.floor(duration / interval + 1e-9))
    return [round(k * interval, 9) for k in range(1, n + 1)]


def _noisy(rng, plant, rel_sd, size):
    if rel_sd == 0:
        return np.full(size, float(plant))
    return np.maximum(plant * (1.0 + rel_sd * rng.standard_normal(size)), 0.0)


def synthesize(plan):
    """Sample lists for one session: (top, packets, proc)."""
    plan.validate()
    rng = np.random.default_rng(plan.seed)
    noise = {k: float(plan.noise.get(k, 0.0)) for k in NOISE_KEYS}

    top_t = _grid(plan.duration_s, plan.top_interval_s)
    rss = _noisy(rng, plan.rss_kb, noise["rss"], len(top_t))
    cpu = np.minimum(_noisy(rng, plan.cpu_pct, noise["cpu"], len(top_t)), 100.0)
    top = [TopSample(t, plan.pid, float(np.round(r, 3)), float(np.round(c, 4)))
           for t, r, c in zip(top_t, rss, cpu)]

    proc_t = _grid(plan.duration_s, plan.proc_interval_s)
    threads = np.maximum(np.rint(_noisy(rng, plan.thread_count, noise["threads"], len(proc_t))), 1)
    freqs = np.maximum(np.rint(_noisy(rng, plan.cpu_freq_khz, noise["freq"], len(proc_t))), 1)
    proc = [ProcSample(t, int(n), int(f)) for t, n, f in zip(proc_t, threads, freqs)]

    if plan.poisson:
        count = int(rng.poisson(plan.packet_rate_pps * plan.duration_s))
        times = np.sort(rng.uniform(0.0, plan.duration_s, count))
    else:
        count = int(round(plan.packet_rate_pps * plan.duration_s))
        spacing = plan.duration_s / count if count else 0.0
        jitter = rng.uniform(-0.25, 0.25, count) * spacing
        times = np.sort(np.clip((np.arange(count) + 0.5) * spacing + jitter, 0.0, plan.duration_s))
    sizes = np.maximum(np.rint(_noisy(rng, plan.packet_bytes, noise["bytes"], count)), 1)
    inbound = rng.uniform(size=count) < plan.in_fraction
    packets = [PacketRecord(float(np.round(t, 6)), Direction.IN if i else Direction.OUT, int(b))
               for t, i, b in zip(times, inbound, sizes)]
    return top, packets, proc


def _bookkeeping(plan, top, packets, proc):
    # independent of trace.compute_cost_vector: numpy means over the emitted values
    def mean(vals):
        return float(np.mean(vals)) if len(vals) else 0.0
    total = int(np.sum([p.bytes for p in packets], dtype=np.int64)) if packets else 0
    return CostVector(
        mem_rss_avg_kb=mean([s.rss_kb for s in top]),
        cpu_util_avg_pct=mean([s.cpu_pct for s in top]),
        thread_count_avg=mean([s.thread_count for s in proc]),
        total_bytes=float(total),
        packet_count=float(len(packets)),
        avg_packet_rate_pps=len(packets) / plan.duration_s,
        avg_cpu_freq_khz=mean([s.cpu_freq_khz for s in proc]),
    )


def _vector_json(cv):
    return {k: v for k, v in cv.values().items() if k != "power_mw"}


def generate_session(plan, out_dir, extra_meta=None):
    """Write one session to out_dir; returns (manifest path, ground-truth CostVector)."""
    out_dir = Path(out_dir)
    top, packets, proc = synthesize(plan)
    truth = _bookkeeping(plan, top, packets, proc)
    atomic_write_text(out_dir / "top.csv", format_top_log(top))
    atomic_write_text(out_dir / "packets.csv", format_packet_log(packets))
    atomic_write_text(out_dir / "proc.csv", format_proc_log(proc))
    manifest = {
        "label": plan.label,
        "duration_s": plan.duration_s,
        "top_log": "top.csv",
        "packet_log": "packets.csv",
        "proc_log": "proc.csv",
        "pid": plan.pid,
        **(extra_meta or {}),
    }
    atomic_write_text(out_dir / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    plan_json = dataclasses.asdict(plan)
    atomic_write_text(out_dir / "ground_truth.json", json.dumps(
        {"label": plan.label, "seed": plan.seed, "plants": _vector_json(plan.plants()),
         "emitted_means": _vector_json(truth), "plan": plan_json}, indent=2) + "\n")
    return out_dir / "manifest.json", truth
