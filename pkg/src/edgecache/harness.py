"""Config-driven experiment runner: policies vs. the offline comparator.

Runs are two-pass: the trace is materialized first (so the offline static
policy can see total popularities), then every requested online policy steps
through it. Results land in two CSV files per run, ``costs.csv`` with the
per-slot latency and installation cost of each policy and ``regret.csv``
with cumulative regret and regret per slot.
"""

import dataclasses
import os
from dataclasses import dataclass, field

import numpy as np

from .model import MM1Latency, ServiceCatalog, validate_latency_pairing
from .policies import (
    OCRPolicy,
    OfflinePolicy,
    OGAPolicy,
    ROCRPolicy,
    regret_series,
    solve_offline_static,
)
from .workload import WorkloadSpec, generate_trace, read_trace

KNOWN_POLICIES = ("OCR", "ROCR", "OGA", "OFF")


@dataclass
class ExperimentConfig:
    """All knobs of one experiment; defaults mirror the standard scenario."""

    n_services: int = 100
    capacity: int = 6
    d_min: float = 2.0
    d_max: float = 4.0
    phi: float = 60.0
    beta: float = 100.0
    eta: float = 0.05
    eta_over_sqrt_t: bool = False
    K: int = 100
    horizon: int = 1000
    requests_per_slot: float = 150.0
    zipf_exponent: float = 0.8
    shuffle_period: int = 50
    shuffle_fraction: float = 0.2
    poisson: bool = False
    policies: tuple = ("OCR", "ROCR", "OGA", "OFF")
    seeds: tuple = (1,)
    trace_path: str | None = None
    out_dir: str = "results"

    def __post_init__(self):
        if self.n_services < 1:
            raise ValueError("config field n_services must be >= 1")
        if self.capacity < 1:
            raise ValueError("config field capacity must be >= 1")
        if not 0 < self.d_min <= self.d_max:
            raise ValueError("config fields d_min/d_max must satisfy 0 < d_min <= d_max")
        if self.phi <= 0:
            raise ValueError("config field phi must be positive")
        if self.beta < 0:
            raise ValueError("config field beta must be >= 0")
        if self.eta <= 0:
            raise ValueError("config field eta must be positive")
        if self.K < 1:
            raise ValueError("config field K must be >= 1")
        if self.horizon < 1:
            raise ValueError("config field horizon must be >= 1")
        if not self.seeds:
            raise ValueError("config field seeds must be nonempty")
        bad = [p for p in self.policies if p not in KNOWN_POLICIES]
        if bad:
            raise ValueError(
                f"config field policies: unknown {bad}, known: {list(KNOWN_POLICIES)}"
            )

    @classmethod
    def from_file(cls, path):
        """Parse a flat key=value config file with typed validation."""
        values = {}
        fields = {f.name: f for f in dataclasses.fields(cls)}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value, got '{line}'")
                key, _, raw = line.partition("=")
                key = key.strip()
                if key not in fields:
                    raise ValueError(f"{path}:{lineno}: unknown config field '{key}'")
                values[key] = _parse_field(key, raw.strip())
        return cls(**values)

    def step_size(self):
        """Effective learner step size, optionally scaled by 1/sqrt(T)."""
        if self.eta_over_sqrt_t:
            return self.eta / np.sqrt(self.horizon)
        return self.eta


def _parse_field(key, raw):
    converters = {
        "n_services": int, "capacity": int, "K": int, "horizon": int,
        "shuffle_period": int,
        "d_min": float, "d_max": float, "phi": float, "beta": float,
        "eta": float, "requests_per_slot": float, "zipf_exponent": float,
        "shuffle_fraction": float,
        "poisson": _parse_bool, "eta_over_sqrt_t": _parse_bool,
        "trace_path": str, "out_dir": str,
    }
    try:
        if key == "policies":
            return tuple(p.strip().upper() for p in raw.split(",") if p.strip())
        if key == "seeds":
            return tuple(int(s) for s in raw.split(",") if s.strip())
        return converters[key](raw)
    except (ValueError, KeyError) as exc:
        raise ValueError(f"config field {key}: cannot parse '{raw}' ({exc})") from None


def _parse_bool(raw):
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw}")


def build_catalog(config, seed):
    """Sample forwarding latencies for one seed; deterministic in (config, seed)."""
    rng = np.random.default_rng([seed, 0xD])
    d = rng.uniform(config.d_min, config.d_max, size=config.n_services)
    return ServiceCatalog(forwarding_latency=d, capacity=config.capacity)


def materialize_trace(config, seed):
    """First pass: the full arrival trace for one seed."""
    if config.trace_path is not None:
        return read_trace(config.trace_path, n_services=config.n_services)
    spec = WorkloadSpec(
        n_services=config.n_services,
        horizon=config.horizon,
        zipf_exponent=config.zipf_exponent,
        requests_per_slot=config.requests_per_slot,
        shuffle_period=config.shuffle_period,
        shuffle_fraction=config.shuffle_fraction,
        seed=seed,
        poisson=config.poisson,
    )
    return generate_trace(spec)


def make_policy(name, config, catalog, latency_fn, x_static, seed):
    eta = config.step_size()
    if name == "OCR":
        return OCRPolicy(catalog, latency_fn, config.beta, eta)
    if name == "OGA":
        return OGAPolicy(catalog, latency_fn, config.beta, eta)
    if name == "ROCR":
        rng = np.random.default_rng([seed, 0xA])
        return ROCRPolicy(catalog, latency_fn, config.beta, eta, config.K, rng)
    if name == "OFF":
        return OfflinePolicy(catalog, latency_fn, x_static)
    raise ValueError(f"unknown policy {name}")


def run_single(config, seed):
    """Run all configured policies on one seed's trace.

    Returns {policy: (records, cum_regret, regret_per_slot)}.
    """
    catalog = build_catalog(config, seed)
    latency_fn = MM1Latency(phi=config.phi)
    validate_latency_pairing(catalog, latency_fn)
    trace = materialize_trace(config, seed)
    x_static = solve_offline_static(catalog, trace)
    offline = OfflinePolicy(catalog, latency_fn, x_static)
    offline_records = [offline.step(a) for a in trace]
    offline_latency = [r.latency_cost for r in offline_records]

    results = {}
    for name in config.policies:
        if name == "OFF":
            records = offline_records
        else:
            policy = make_policy(name, config, catalog, latency_fn, x_static, seed)
            records = [policy.step(a) for a in trace]
        cum, per_slot = regret_series(records, offline_latency)
        results[name] = (records, cum, per_slot)
    return results


def run_experiment(config):
    """Full run over all seeds; writes costs.csv and regret.csv to out_dir."""
    all_results = {seed: run_single(config, seed) for seed in config.seeds}
    return _write_outputs(config, all_results)


def _write_outputs(config, all_results):
    os.makedirs(config.out_dir, exist_ok=True)
    costs_path = os.path.join(config.out_dir, "costs.csv")
    regret_path = os.path.join(config.out_dir, "regret.csv")
    with open(costs_path, "w", encoding="utf-8") as fh:
        fh.write("t,policy,latency_cost,install_cost,seed\n")
        for name in config.policies:
            for seed in config.seeds:
                for rec in all_results[seed][name][0]:
                    fh.write(
                        f"{rec.slot},{name},{float(rec.latency_cost)!r},"
                        f"{float(rec.install_cost)!r},{seed}\n"
                    )
    with open(regret_path, "w", encoding="utf-8") as fh:
        fh.write("t,policy,cum_regret,regret_per_slot,seed\n")
        for name in config.policies:
            for seed in config.seeds:
                _, cum, per_slot = all_results[seed][name]
                for t in range(cum.size):
                    fh.write(
                        f"{t + 1},{name},{float(cum[t])!r},"
                        f"{float(per_slot[t])!r},{seed}\n"
                    )
    return costs_path, regret_path


def run_sweep(config, param, values):
    """Run the experiment once per value of one swept parameter.

    Writes each run into a subdirectory of out_dir and a summary.csv with
    the mean per-slot total cost per (value, policy), averaged over seeds.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    summary_path = os.path.join(config.out_dir, "summary.csv")
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write(f"{param},policy,avg_cost_per_slot\n")
        for value in values:
            sub = dataclasses.replace(
                config,
                **{param: value},
                out_dir=os.path.join(config.out_dir, f"{param}_{value:g}"),
            )
            all_results = {seed: run_single(sub, seed) for seed in sub.seeds}
            _write_outputs(sub, all_results)
            for name in sub.policies:
                avg = float(np.mean([
                    np.mean([r.total_cost for r in all_results[seed][name][0]])
                    for seed in sub.seeds
                ]))
                fh.write(f"{value:g},{name},{avg!r}\n")
    return summary_path
