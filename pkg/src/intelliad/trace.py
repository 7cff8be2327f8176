"""Measurement-log parsing and per-session cost metrics.

Three canonical CSV logs describe one app run (no header required; an
optional header row naming the columns is skipped, as are blank lines and
lines starting with '#'):

    top log     t_s,pid,rss_kb,cpu_pct
    packet log  t_s,direction,bytes        direction is "in" or "out"
    proc log    t_s,thread_count,cpu_freq_khz

A JSON manifest names the three files, the session label and duration.
"""

import dataclasses
import enum
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .errors import (EmptyRunList, InvalidSession, MalformedLine,
                     NonMonotonicTimestamp, ZeroDuration)
from .power import cpu_power, wifi_power

log = logging.getLogger(__name__)


class Direction(enum.Enum):
    IN = "in"
    OUT = "out"


class TopSample(NamedTuple):
    t: float
    pid: int
    rss_kb: float
    cpu_pct: float


class PacketRecord(NamedTuple):
    t: float
    direction: Direction
    bytes: int


class ProcSample(NamedTuple):
    t: float
    thread_count: int
    cpu_freq_khz: int


TOP_COLUMNS = ("t_s", "pid", "rss_kb", "cpu_pct")
PACKET_COLUMNS = ("t_s", "direction", "bytes")
PROC_COLUMNS = ("t_s", "thread_count", "cpu_freq_khz")


def _lines(stream):
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line_no, line


def _number(token, line_no, what):
    try:
        value = float(token)
    except ValueError:
        raise MalformedLine(line_no, f"{what} {token!r} is not a number") from None
    if not math.isfinite(value):
        raise MalformedLine(line_no, f"{what} must be finite")
    return value


def _integer(token, line_no, what):
    try:
        return int(token)
    except ValueError:
        raise MalformedLine(line_no, f"{what} {token!r} is not an integer") from None


def _parse(stream, columns, convert):
    out = []
    last_t = None
    first = True
    for line_no, line in _lines(stream):
        fields = [f.strip() for f in line.split(",")]
        if first and fields[0] == columns[0]:
            first = False
            continue
        first = False
        if len(fields) != len(columns):
            raise MalformedLine(line_no, f"expected {len(columns)} fields, got {len(fields)}")
        t = _number(fields[0], line_no, "t_s")
        if t < 0:
            raise MalformedLine(line_no, "timestamp must be nonnegative")
        if last_t is not None and t < last_t:
            raise NonMonotonicTimestamp(line_no)
        last_t = t
        out.append(convert(t, fields, line_no))
    return out


def _top(t, fields, line_no):
    pid = _integer(fields[1], line_no, "pid")
    rss = _number(fields[2], line_no, "rss_kb")
    cpu = _number(fields[3], line_no, "cpu_pct")
    if rss < 0:
        raise MalformedLine(line_no, "rss_kb must be nonnegative")
    if not 0.0 <= cpu <= 100.0:
        raise MalformedLine(line_no, "cpu_pct must lie in [0, 100]")
    return TopSample(t, pid, rss, cpu)


def _packet(t, fields, line_no):
    try:
        direction = Direction(fields[1].lower())
    except ValueError:
        raise MalformedLine(line_no, f"direction {fields[1]!r} is not in/out") from None
    size = _integer(fields[2], line_no, "bytes")
    if size <= 0:
        raise MalformedLine(line_no, "bytes must be positive")
    return PacketRecord(t, direction, size)


def _proc(t, fields, line_no):
    threads = _integer(fields[1], line_no, "thread_count")
    freq = _integer(fields[2], line_no, "cpu_freq_khz")
    if threads < 1:
        raise MalformedLine(line_no, "thread_count must be at least 1")
    if freq <= 0:
        raise MalformedLine(line_no, "cpu_freq_khz must be positive")
    return ProcSample(t, threads, freq)


def parse_top_log(stream, pid=None):
    """Parse a top log; with `pid` set, rows of other processes are dropped."""
    samples = _parse(stream, TOP_COLUMNS, _top)
    if pid is not None:
        samples = [s for s in samples if s.pid == pid]
    return samples


def parse_packet_log(stream):
    return _parse(stream, PACKET_COLUMNS, _packet)


def parse_proc_log(stream):
    return _parse(stream, PROC_COLUMNS, _proc)


def fmt_num(x):
    """Shortest text that parses back to the same float."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def format_top_log(samples):
    return "".join(f"{fmt_num(s.t)},{s.pid},{fmt_num(s.rss_kb)},{fmt_num(s.cpu_pct)}\n"
                   for s in samples)


def format_packet_log(packets):
    return "".join(f"{fmt_num(p.t)},{p.direction.value},{p.bytes}\n" for p in packets)


def format_proc_log(samples):
    return "".join(f"{fmt_num(s.t)},{s.thread_count},{s.cpu_freq_khz}\n" for s in samples)


@dataclass
class MeasurementSession:
    label: str
    duration_s: float
    top_samples: list = field(default_factory=list)
    packets: list = field(default_factory=list)
    proc_samples: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def validate(self):
        if not self.duration_s > 0:
            raise ZeroDuration(f"session {self.label!r} has duration {self.duration_s}")
        for name in ("top_samples", "packets", "proc_samples"):
            ts = [s.t for s in getattr(self, name)]
            if any(b < a for a, b in zip(ts, ts[1:])):
                raise InvalidSession(f"{self.label}: {name} not sorted by time")
            if ts and ts[-1] > self.duration_s:
                raise InvalidSession(
                    f"{self.label}: {name} has a sample at t={ts[-1]} beyond "
                    f"duration {self.duration_s}")


def load_session(manifest_path):
    """Read a session manifest and the three logs it names (paths are manifest-relative)."""
    manifest_path = Path(manifest_path)
    try:
        meta = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidSession(f"cannot read manifest {manifest_path}: {exc}") from exc
    base = manifest_path.parent
    try:
        label = str(meta["label"])
        duration = float(meta["duration_s"])
        logs = {k: base / meta[k] for k in ("top_log", "packet_log", "proc_log")}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSession(f"{manifest_path}: missing or bad field {exc}") from exc
    texts = {}
    for key, path in logs.items():
        try:
            texts[key] = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InvalidSession(f"{manifest_path}: cannot read {key} {path}: "
                                 f"{exc.strerror or exc}") from exc
    session = MeasurementSession(
        label=label,
        duration_s=duration,
        top_samples=parse_top_log(texts["top_log"], pid=meta.get("pid")),
        packets=parse_packet_log(texts["packet_log"]),
        proc_samples=parse_proc_log(texts["proc_log"]),
        meta={k: v for k, v in meta.items() if k not in logs},
    )
    session.validate()
    return session


METRICS = ("mem_rss_avg_kb", "cpu_util_avg_pct", "thread_count_avg", "total_bytes",
           "packet_count", "avg_packet_rate_pps", "avg_cpu_freq_khz", "power_mw")


@dataclass(frozen=True)
class CostVector:
    mem_rss_avg_kb: float = 0.0
    cpu_util_avg_pct: float = 0.0
    thread_count_avg: float = 0.0
    total_bytes: float = 0.0
    packet_count: float = 0.0
    avg_packet_rate_pps: float = 0.0
    avg_cpu_freq_khz: float = 0.0
    power_mw: float = 0.0
    warnings: tuple = ()

    def values(self):
        return {m: getattr(self, m) for m in METRICS}

    def with_warning(self, *msgs):
        return dataclasses.replace(self, warnings=self.warnings + tuple(msgs))


def _mean(values):
    return math.fsum(values) / len(values) if values else 0.0


def compute_cost_vector(session):
    """Average memory/CPU/thread figures and traffic totals for one session.

    power_mw stays 0 until estimate_power is applied.
    """
    if not session.duration_s > 0:
        raise ZeroDuration(f"session {session.label!r} has duration {session.duration_s}")
    if not (session.top_samples or session.packets or session.proc_samples):
        raise InvalidSession(f"session {session.label!r} has no samples at all")
    warnings = []
    if not session.top_samples:
        warnings.append("no top samples: rss and cpu averages set to 0")
    if not session.proc_samples:
        warnings.append("no proc samples: thread count and frequency averages set to 0")
    top, proc = session.top_samples, session.proc_samples
    total_bytes = sum(p.bytes for p in session.packets)
    count = len(session.packets)
    return CostVector(
        mem_rss_avg_kb=_mean([s.rss_kb for s in top]),
        cpu_util_avg_pct=_mean([s.cpu_pct for s in top]),
        thread_count_avg=_mean([s.thread_count for s in proc]),
        total_bytes=float(total_bytes),
        packet_count=float(count),
        avg_packet_rate_pps=count / session.duration_s,
        avg_cpu_freq_khz=_mean([s.cpu_freq_khz for s in proc]),
        power_mw=0.0,
        warnings=tuple(warnings),
    )


def estimate_power(cost, model):
    """Attach WiFi + CPU power (mW) from the session's packet rate, utilization and frequency."""
    p = cost.avg_packet_rate_pps
    u = cost.cpu_util_avg_pct / 100.0
    power = wifi_power(p, model.wifi) + cpu_power(u, cost.avg_cpu_freq_khz, model)
    return dataclasses.replace(cost, power_mw=power)


class Separation(NamedTuple):
    delta: CostVector
    increase_rate: dict   # metric -> float, or None where the baseline is 0

    @property
    def undefined(self):
        return sorted(m for m, r in self.increase_rate.items() if r is None)


def separate_costs(ad_app, prototype):
    """Ad-attributable cost: signed fieldwise difference and per-metric increase rate."""
    delta = {}
    rates = {}
    for m in METRICS:
        a, b = getattr(ad_app, m), getattr(prototype, m)
        delta[m] = a - b
        rates[m] = None if b == 0 else (a - b) / b
    flags = tuple(f"increase rate of {m} undefined (zero baseline)"
                  for m, r in rates.items() if r is None)
    return Separation(CostVector(**delta, warnings=flags), rates)


def aggregate_runs(runs, n_expected=4):
    """Fieldwise mean over repeated runs of the same configuration."""
    runs = list(runs)
    if not runs:
        raise EmptyRunList("cannot aggregate an empty run list")
    means = {m: math.fsum(getattr(r, m) for r in runs) / len(runs) for m in METRICS}
    warnings = []
    if n_expected is not None and len(runs) != n_expected:
        msg = f"aggregated {len(runs)} runs, expected {n_expected}"
        log.warning(msg)
        warnings.append(msg)
    return CostVector(**means, warnings=tuple(warnings))
