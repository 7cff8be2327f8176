"""Workspace stages: inspect, simulate, profile, reviews, correlate, report.

Every stage reads its inputs from files and writes its outputs under the
workspace output directory, so stages can be rerun independently. Each
stage returns the number of errors it hit; warnings are logged and written
to the stage's warnings file where one exists.
"""

import json
import logging
import math
import os
import sys
import zlib
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import analytics, catalog as cat, reviews as rv, simdevice, trace
from ._io import atomic_write_text, read_csv, write_csv, write_json
from .cluster import cluster_phrases
from .embedding import CooccurrencePpmi, FileBacked, embed_phrases
from .errors import ConfigError, IntelliAdError
from .power import load_power_model
from .reviews import CostType

log = logging.getLogger(__name__)

CONFIG_ENV = "INTELLIAD_CONFIG"

_PATH_KEYS = ("catalog", "power_model", "keywords", "stopwords", "reviews", "app_schemes",
              "apps", "simulation", "traces", "embedding_vectors", "out")


@dataclass
class WorkspaceConfig:
    base_dir: Path = field(default_factory=Path.cwd)
    catalog: Path = None
    power_model: Path = None
    keywords: Path = None
    stopwords: Path = None
    reviews: Path = None
    app_schemes: Path = None
    apps: Path = None
    simulation: Path = None
    traces: Path = None
    embedding_vectors: Path = None
    out: Path = Path("out")
    k: int = 4
    rating_cutoff: int = 3
    runs_expected: int = 4
    seed: int = 0
    embedding_dim: int = 8
    embedding_window: int = 2
    min_phrase_count: int = 2
    granularity: str = "scheme"
    report_places: int = 6
    data_plan: dict = field(default_factory=lambda: {"price": 25.0, "gigabytes": 5.0})

    @property
    def traces_dir(self):
        return self.traces or self.out / "traces"

    def stage_dir(self, name):
        return self.out / name

    def scheme_of_app(self):
        if self.app_schemes is None:
            return {}
        try:
            return json.loads(Path(self.app_schemes).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read app_schemes {self.app_schemes}: {exc}") from exc


def load_config(path=None, overrides=None):
    """Read a workspace config; paths inside it are relative to the config file.

    Without an explicit path, the INTELLIAD_CONFIG environment variable is
    consulted; with neither, defaults apply (bundled catalog, keywords and
    stopwords; output under ./out).
    """
    path = path or os.environ.get(CONFIG_ENV)
    raw = {}
    base = Path.cwd()
    if path:
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        base = path.resolve().parent
    cfg = WorkspaceConfig(base_dir=base)
    known = set(WorkspaceConfig.__dataclass_fields__) - {"base_dir"}
    for key, value in raw.items():
        if key.startswith("_"):
            continue
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if key in _PATH_KEYS and value is not None:
            value = base / value
        setattr(cfg, key, value)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in _PATH_KEYS:
            value = Path(value)
        setattr(cfg, key, value)
    return cfg


def _catalog(cfg):
    return cat.load_catalog(cfg.catalog) if cfg.catalog else cat.default_catalog()


def _fmt(x, places=None):
    if x is None:
        return "undefined"
    if isinstance(x, float) and places is not None:
        x = analytics.present(x, places)
    return trace.fmt_num(x) if isinstance(x, (int, float)) else str(x)


# ------------------------------------------------------------------ inspect

FORMAT_COLUMNS = [f.value for f in cat.AdFormat]


def run_inspect(cfg, app_paths=None):
    """Identify ad schemes for each app input; one JSON report per app plus a summary."""
    if app_paths is None:
        app_paths = sorted(p for p in Path(cfg.apps).iterdir()) if cfg.apps else []
    catalog = _catalog(cfg)
    schemes = cfg.scheme_of_app()
    out = cfg.stage_dir("inspect")
    out.mkdir(parents=True, exist_ok=True)
    rows, errors = [], 0
    for path in app_paths:
        try:
            app = cat.AppPackageInput.detect(path)
            networks = sorted(cat.detect_networks(app, catalog))
            if app.kind is cat.InputKind.DECOMPILED_TREE:
                scheme = cat.extract_ad_formats(app, catalog)
            else:
                scheme = cat.AdIntegrationScheme(
                    warnings=["RawDex input: formats and ad count not recoverable"])
        except IntelliAdError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            errors += 1
            continue
        app_id = app.app_id()
        report = scheme.to_json(app_id)
        report["input_kind"] = app.kind.value
        report["networks"] = networks
        write_json(out / f"{app_id}.json", report)
        per_format = {f: 0 for f in FORMAT_COLUMNS}
        for p in scheme.placements:
            per_format[p.format.value] += 1
        rows.append([app_id, schemes.get(app_id, ""), app.kind.value, ";".join(networks),
                     *[per_format[f] for f in FORMAT_COLUMNS], scheme.ad_count,
                     len(scheme.warnings)])
    rows.sort(key=lambda r: r[0])
    write_csv(out / "schemes_summary.csv",
              ["app_id", "scheme", "input_kind", "networks", *FORMAT_COLUMNS, "ad_count",
               "warnings"], rows)
    return errors


# ----------------------------------------------------------------- simulate

_PLANT_KEYS = ("rss_kb", "cpu_pct", "thread_count", "packet_rate_pps", "packet_bytes",
               "in_fraction", "cpu_freq_khz")


def derive_seed(seed, label, run):
    return int(np.random.SeedSequence([int(seed), zlib.crc32(label.encode()), int(run)])
               .generate_state(1)[0])


def run_simulate(cfg, runs=None):
    """Generate baseline and per-scheme sessions from the simulation plan file."""
    if cfg.simulation is None:
        raise ConfigError("config has no 'simulation' plan file")
    sim = json.loads(Path(cfg.simulation).read_text(encoding="utf-8"))
    runs = int(runs or sim.get("runs", cfg.runs_expected))
    common = {k: sim[k] for k in ("duration_s", "op_interval_s", "top_interval_s",
                                   "proc_interval_s", "poisson") if k in sim}
    base_plan = simdevice.SessionPlan(label="baseline", noise=dict(sim.get("noise", {})),
                                      **common, **{k: sim["baseline"][k]
                                                   for k in _PLANT_KEYS if k in sim["baseline"]})
    base_plan.validate()
    out = cfg.traces_dir
    configs = [("baseline", "baseline", base_plan)]
    for scheme in sorted(sim.get("schemes", {})):
        lifts = {k: v for k, v in sim["schemes"][scheme].items() if not k.startswith("_")}
        configs.append((scheme, "ad", base_plan.scaled(scheme, lifts)))
    truth_rows = []
    for scheme, role, plan in configs:
        for run in range(1, runs + 1):
            p = replace(plan, seed=derive_seed(cfg.seed, scheme, run))
            _, truth = simdevice.generate_session(
                p, out / scheme / f"run{run}",
                extra_meta={"scheme": scheme, "run": run, "role": role,
                            "op_interval_s": p.op_interval_s})
            truth_rows.append([scheme, run, role] + [_fmt(v) for k, v in truth.values().items()
                                                     if k != "power_mw"])
    write_csv(out / "ground_truth.csv",
              ["scheme", "run", "role"] + [m for m in trace.METRICS if m != "power_mw"],
              truth_rows)
    return 0


# ------------------------------------------------------------------ profile

def _discover_manifests(root):
    return sorted(Path(root).rglob("manifest.json")) if Path(root).is_dir() else []


def run_profile(cfg, manifests=None, baselines=None):
    """Cost vectors per session, per-scheme run means, deltas and increase rates vs baseline."""
    model = load_power_model(cfg.power_model) if cfg.power_model else None
    if model is None:
        raise ConfigError("config has no 'power_model' file")
    if manifests is None:
        manifests = _discover_manifests(cfg.traces_dir)
    manifests = [Path(m) for m in manifests]
    explicit_baselines = {Path(b).resolve() for b in (baselines or [])}
    manifests += [Path(b) for b in (baselines or []) if Path(b).resolve()
                  not in {m.resolve() for m in manifests}]
    out = cfg.stage_dir("profile")
    errors = []
    session_rows = []
    groups = defaultdict(list)
    base_runs = []
    for m in manifests:
        rel = _rel(m, cfg)
        try:
            session = trace.load_session(m)
            cost = trace.estimate_power(trace.compute_cost_vector(session), model)
        except IntelliAdError as exc:
            errors.append([rel, f"{type(exc).__name__}: {exc}"])
            print(f"error: {m}: {exc}", file=sys.stderr)
            continue
        role = "baseline" if (m.resolve() in explicit_baselines
                              or session.meta.get("role") == "baseline") else "ad"
        scheme = str(session.meta.get("scheme", session.label))
        (base_runs if role == "baseline" else groups[scheme]).append(cost)
        session_rows.append([rel, scheme if role == "ad" else "baseline",
                             session.meta.get("run", ""), role]
                            + [_fmt(v) for v in cost.values().values()]
                            + ["; ".join(cost.warnings)])
    write_csv(out / "sessions.csv", ["manifest", "scheme", "run", "role", *trace.METRICS,
                                     "warnings"], session_rows)
    write_csv(out / "errors.csv", ["manifest", "error"], errors)
    if not base_runs:
        print("error: no baseline (prototype) sessions found", file=sys.stderr)
        return len(errors) + 1
    baseline = trace.aggregate_runs(base_runs, cfg.runs_expected)
    agg_rows = [["baseline", len(base_runs)] + [_fmt(v) for v in baseline.values().values()]
                + ["; ".join(baseline.warnings)]]
    delta_rows, rate_rows = [], []
    for scheme in sorted(groups, key=_scheme_key):
        agg = trace.aggregate_runs(groups[scheme], cfg.runs_expected)
        sep = trace.separate_costs(agg, baseline)
        agg_rows.append([scheme, len(groups[scheme])] + [_fmt(v) for v in agg.values().values()]
                        + ["; ".join(agg.warnings)])
        delta_rows.append([scheme] + [_fmt(v) for v in sep.delta.values().values()])
        rate_rows.append([scheme] + [_fmt(sep.increase_rate[k]) for k in trace.METRICS])
    write_csv(out / "scheme_costs.csv", ["scheme", "n_runs", *trace.METRICS, "warnings"], agg_rows)
    write_csv(out / "deltas.csv", ["scheme", *trace.METRICS], delta_rows)
    write_csv(out / "increase_rates.csv", ["scheme", *trace.METRICS], rate_rows)
    return len(errors)


def _rel(path, cfg):
    try:
        return Path(path).resolve().relative_to(Path(cfg.out).resolve()).as_posix()
    except ValueError:
        return Path(path).as_posix()


def _scheme_key(s):
    # A2 before A10
    head = s.rstrip("0123456789")
    tail = s[len(head):]
    return (head, int(tail) if tail else -1, s)


# ------------------------------------------------------------------ reviews

def run_reviews(cfg):
    """Filter ad reviews, cluster phrase candidates, and rate each cost type per scheme."""
    if cfg.reviews is None:
        raise ConfigError("config has no 'reviews' file")
    reviews = rv.load_reviews(cfg.reviews)
    table = rv.KeywordTable.load(cfg.keywords)
    stopwords = rv.load_stopwords(cfg.stopwords)
    scheme_of_app = cfg.scheme_of_app()
    out = cfg.stage_dir("reviews")
    errors = 0

    ad_reviews = rv.filter_ad_reviews(reviews)
    lines = "".join(json.dumps(r.to_json()) + "\n" for r in ad_reviews)
    atomic_write_text(out / "ad_reviews.jsonl", lines)

    candidates = rv.extract_phrase_candidates(ad_reviews, stopwords)
    write_csv(out / "phrases.csv", ["phrase", "count"], [[c.text, c.count] for c in candidates])
    chosen = [c for c in candidates if c.count >= cfg.min_phrase_count]
    clusters_out = {}
    if len(chosen) >= cfg.k:
        if cfg.embedding_vectors:
            provider = FileBacked(cfg.embedding_vectors)
        else:
            docs = [rv.content_tokens(r.text, stopwords) for r in ad_reviews]
            provider = CooccurrencePpmi(docs, cfg.embedding_dim, cfg.embedding_window)
        vectors = embed_phrases(chosen, provider, provider.dim)
        clusters, result = cluster_phrases(vectors, k=cfg.k, seed=cfg.seed)
        clusters_out = {
            "k": cfg.k, "seed": cfg.seed, "iterations": result.n_iter,
            "wcss": result.wcss,
            "clusters": {str(j): [{"phrase": p.text, "count": p.count} for p in phrases]
                         for j, phrases in clusters.items()},
        }
    else:
        log.warning("only %d phrases with count >= %d; clustering skipped",
                    len(chosen), cfg.min_phrase_count)
    write_json(out / "clusters.json", clusters_out)

    classified_rows = []
    for r in reviews:
        labels = rv.classify_review(r, table, cfg.rating_cutoff)
        if labels:
            classified_rows.append([r.app_id, scheme_of_app.get(r.app_id, ""), r.rating,
                                    ";".join(c.value for c in CostType if c in labels)])
    write_csv(out / "classified.csv", ["app_id", "scheme", "rating", "cost_types"],
              classified_rows)

    try:
        by_scheme = rv.aggregate_cost_ratings(reviews, table, scheme_of_app, cfg.rating_cutoff)
    except IntelliAdError as exc:
        print(f"error: {cfg.reviews}: {exc}", file=sys.stderr)
        errors += 1
        by_scheme = {}
    counts = defaultdict(int)
    for r in reviews:
        if r.app_id in scheme_of_app:
            for c in rv.classify_review(r, table, cfg.rating_cutoff):
                counts[(scheme_of_app[r.app_id], c)] += 1
    write_csv(out / "cost_ratings.csv", ["scheme", "cost_type", "avg_rating", "n_reviews"],
              [[s, c.value, _fmt(v), counts[(s, c)]] for (s, c), v in
               sorted(by_scheme.items(), key=lambda kv: (_scheme_key(kv[0][0]),
                                                         list(CostType).index(kv[0][1])))])
    by_app = rv.aggregate_cost_ratings(reviews, table, {a: a for a in
                                                        {r.app_id for r in reviews}},
                                       cfg.rating_cutoff)
    write_csv(out / "app_cost_ratings.csv", ["app_id", "cost_type", "avg_rating"],
              [[a, c.value, _fmt(v)] for (a, c), v in sorted(
                  by_app.items(), key=lambda kv: (kv[0][0], list(CostType).index(kv[0][1])))])
    means = rv.cost_type_means(reviews, table, cfg.rating_cutoff)
    write_json(out / "stats.json", {
        "n_reviews": len(reviews),
        "n_ad_reviews": len(ad_reviews),
        "ad_review_ratio": len(ad_reviews) / len(reviews) if reviews else 0.0,
        "concern_ratios": rv.concern_ratios(ad_reviews),
        "n_phrase_candidates": len(candidates),
        "n_clustered_phrases": len(chosen) if clusters_out else 0,
        "cost_type_mean_rating": {c.value: v for c, v in means.items()},
    })
    return errors


# ---------------------------------------------------------------- correlate

def _inspect_ad_counts(cfg):
    """Mean ad count per scheme from the inspect stage reports."""
    schemes = cfg.scheme_of_app()
    per_scheme = defaultdict(list)
    inspect_dir = cfg.stage_dir("inspect")
    for path in sorted(inspect_dir.glob("*.json")) if inspect_dir.is_dir() else []:
        report = json.loads(path.read_text(encoding="utf-8"))
        scheme = schemes.get(report["app_id"])
        if scheme and report.get("input_kind", "DecompiledTree") == "DecompiledTree":
            per_scheme[scheme].append(report["ad_count"])
    return {s: math.fsum(v) / len(v) for s, v in per_scheme.items()}


def load_observations_csv(path):
    """Rows scheme,cost_type,measured,rating -> list of SchemeObservation."""
    obs = {}
    for row in read_csv(path):
        o = obs.setdefault(row["scheme"], analytics.SchemeObservation(row["scheme"]))
        cost = CostType(row["cost_type"])
        if row.get("measured", "") not in ("", "undefined"):
            o.measured[cost] = float(row["measured"])
        if row.get("rating", "") not in ("", "undefined"):
            o.ratings[cost] = float(row["rating"])
    for o in obs.values():
        o.__post_init__()
    return [obs[s] for s in sorted(obs, key=_scheme_key)]


def gather_observations(cfg):
    """Join measured scheme costs with review ratings; returns (observations, warnings)."""
    measured = defaultdict(dict)
    for s, n in _inspect_ad_counts(cfg).items():
        measured[s][CostType.NUM_ADS] = n
    deltas_path = cfg.stage_dir("profile") / "deltas.csv"
    if deltas_path.exists():
        for row in read_csv(deltas_path):
            for cost in (CostType.MEM_CPU, CostType.TRAFFIC, CostType.BATTERY):
                measured[row["scheme"]][cost] = float(row[analytics.MEASURED_METRIC[cost]])
    ratings = defaultdict(dict)
    if cfg.granularity == "app":
        return _app_observations(cfg, measured)
    rpath = cfg.stage_dir("reviews") / "cost_ratings.csv"
    if rpath.exists():
        for row in read_csv(rpath):
            ratings[row["scheme"]][CostType(row["cost_type"])] = float(row["avg_rating"])
    warnings = []
    for s in sorted(set(measured) ^ set(ratings), key=_scheme_key):
        side = "measurements" if s in measured else "review ratings"
        warnings.append([s, f"UnjoinableScheme: only {side} present; excluded"])
    joint = sorted(set(measured) & set(ratings), key=_scheme_key)
    obs = [analytics.SchemeObservation(s, dict(measured[s]), dict(ratings[s])) for s in joint]
    return obs, warnings


def _app_observations(cfg, measured):
    rpath = cfg.stage_dir("reviews") / "app_cost_ratings.csv"
    schemes = cfg.scheme_of_app()
    per_app = defaultdict(dict)
    if rpath.exists():
        for row in read_csv(rpath):
            per_app[row["app_id"]][CostType(row["cost_type"])] = float(row["avg_rating"])
    obs, warnings = [], []
    for app in sorted(per_app):
        s = schemes.get(app)
        if s not in measured:
            warnings.append([app, "UnjoinableScheme: app has no measured scheme; excluded"])
            continue
        obs.append(analytics.SchemeObservation(app, dict(measured[s]), per_app[app]))
    return obs, warnings


def run_correlate(cfg, observations_csv=None):
    """Pearson correlation of measured cost vs average rating, per cost type."""
    out = cfg.stage_dir("correlate")
    if observations_csv:
        obs, warnings = load_observations_csv(observations_csv), []
    else:
        obs, warnings = gather_observations(cfg)
    for w in warnings:
        log.warning("%s: %s", *w)
    write_csv(out / "observations.csv", ["scheme", "cost_type", "measured", "rating"],
              [[o.scheme_id, c.value, _fmt(o.measured.get(c)), _fmt(o.ratings.get(c))]
               for o in obs for c in CostType if c in o.measured or c in o.ratings])
    write_csv(out / "warnings.csv", ["scheme", "warning"], warnings)
    corr = analytics.correlate_costs_vs_ratings(obs, strict=False)
    rows = []
    for c in CostType:
        n = sum(1 for o in obs if c in o.measured and c in o.ratings)
        rows.append([c.value, analytics.MEASURED_METRIC[c], n, _fmt(corr[c])])
    write_csv(out / "correlations.csv", ["cost_type", "measured_metric", "n", "pearson"], rows)
    return 0


# ------------------------------------------------------------------- report

REPORT_METRICS = ("ad_count", "mem_rss_avg_kb", "cpu_util_avg_pct", "thread_count_avg",
                  "total_bytes", "packet_count", "power_mw")


def _num_or_none(s):
    return None if s in ("", "undefined") else float(s)


def run_report(cfg):
    """Assemble the final tables and JSON summary from the earlier stage outputs."""
    out = cfg.stage_dir("report")
    places = cfg.report_places
    errors = 0

    rates = {}
    rpath = cfg.stage_dir("profile") / "increase_rates.csv"
    if rpath.exists():
        for row in read_csv(rpath):
            rates[row["scheme"]] = {m: _num_or_none(row[m]) for m in trace.METRICS}
    ad_counts = _inspect_ad_counts(cfg)
    schemes = sorted(set(rates) | set(ad_counts), key=_scheme_key)

    write_csv(out / "increase_rates.csv", ["scheme", *trace.METRICS],
              [[s] + [_fmt(rates.get(s, {}).get(m), places) for m in trace.METRICS]
               for s in schemes if s in rates])

    # spread across schemes: ad count itself, increase rates for the measured metrics
    spread_input = {"ad_count": {s: ad_counts[s] for s in schemes if s in ad_counts}}
    for m in REPORT_METRICS[1:]:
        spread_input[m] = {s: rates[s][m] for s in schemes if s in rates}
    stdev_rows = []
    stdevs = {}
    for m in REPORT_METRICS:
        try:
            stdevs[m] = analytics.scheme_stdev_summary({m: spread_input[m]})[m]
        except IntelliAdError:
            stdevs[m] = None
        stdev_rows.append([m, len([v for v in spread_input[m].values() if v is not None]),
                           _fmt(stdevs[m], places)])
    write_csv(out / "stdev_summary.csv", ["metric", "n_schemes", "stdev"], stdev_rows)

    ratings = defaultdict(dict)
    cpath = cfg.stage_dir("reviews") / "cost_ratings.csv"
    if cpath.exists():
        for row in read_csv(cpath):
            ratings[row["scheme"]][row["cost_type"]] = float(row["avg_rating"])
    write_csv(out / "avg_ratings.csv", ["scheme", *[c.value for c in CostType]],
              [[s] + [_fmt(ratings[s].get(c.value), places) for c in CostType]
               for s in sorted(ratings, key=_scheme_key)])

    correlations = {}
    corr_path = cfg.stage_dir("correlate") / "correlations.csv"
    if corr_path.exists():
        for row in read_csv(corr_path):
            correlations[row["cost_type"]] = _num_or_none(row["pearson"])
    write_csv(out / "correlations.csv", ["cost_type", "pearson"],
              [[c.value, _fmt(correlations.get(c.value), 3)] for c in CostType])

    plan = analytics.DataPlan.from_gb(float(cfg.data_plan["price"]),
                                      float(cfg.data_plan["gigabytes"]))
    traffic_rows = []
    dpath = cfg.stage_dir("profile") / "deltas.csv"
    ad_bytes = {}
    if dpath.exists():
        for row in read_csv(dpath):
            ad_bytes[row["scheme"]] = float(row["total_bytes"])
    for s in sorted(ad_bytes, key=_scheme_key):
        cost = analytics.traffic_dollar_cost(max(ad_bytes[s], 0.0), plan)
        traffic_rows.append([s, _fmt(ad_bytes[s]), _fmt(cost, 4)])
    write_csv(out / "traffic_cost.csv", ["scheme", "ad_bytes_per_session", "dollars"],
              traffic_rows)

    long_rows = []
    for s in schemes:
        if s in ad_counts:
            long_rows.append(["ad_count", s, "ad_count", _fmt(ad_counts[s], places)])
        for m in trace.METRICS:
            if s in rates:
                long_rows.append(["increase_rate", s, m, _fmt(rates[s][m], places)])
    for s in sorted(ratings, key=_scheme_key):
        for c in CostType:
            if c.value in ratings[s]:
                long_rows.append(["avg_rating", s, c.value, _fmt(ratings[s][c.value], places)])
    for c in CostType:
        long_rows.append(["pearson", "", c.value, _fmt(correlations.get(c.value), places)])
    write_csv(out / "long_format.csv", ["table", "scheme", "key", "value"], long_rows)

    def mean_rate(m):
        vals = [rates[s][m] for s in rates if rates[s][m] is not None]
        return analytics.present(math.fsum(vals) / len(vals), places) if vals else None

    stats_path = cfg.stage_dir("reviews") / "stats.json"
    stats = json.loads(stats_path.read_text(encoding="utf-8")) if stats_path.exists() else {}
    write_json(out / "summary.json", {
        "n_schemes": len(schemes),
        "mean_increase_rate": {m: mean_rate(m) for m in trace.METRICS} if rates else {},
        "stdev_across_schemes": {m: (analytics.present(v, places) if v is not None else None)
                                 for m, v in stdevs.items()},
        "cost_type_mean_rating": {k: analytics.present(v, places) for k, v in
                                  stats.get("cost_type_mean_rating", {}).items()},
        "pearson": {c.value: (analytics.present(correlations[c.value], 3)
                              if correlations.get(c.value) is not None else None)
                    for c in CostType},
        "data_plan": {"price": plan.price, "quota_bytes": plan.quota_bytes},
    })
    return errors
