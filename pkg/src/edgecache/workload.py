"""Synthetic Zipf workload generation and trace-file I/O.

The synthetic workload assigns each service a popularity rank; per-slot
arrival rates follow a Zipf law over ranks, normalized so each slot carries
requests_per_slot requests in total. Every shuffle_period slots a random
subset of ranks is permuted, modelling drifting popularity. Traces can be
written to and read from a simple CSV format (header ``t,service,lambda``,
1-based slots, 0-based service ids).
"""

from dataclasses import dataclass

import numpy as np

from .model import SlotArrivals

TRACE_HEADER = "t,service,lambda"


@dataclass(frozen=True)
class WorkloadSpec:
    """Parameters of the synthetic Zipf workload with rank shuffling."""

    n_services: int
    horizon: int
    zipf_exponent: float = 0.8
    requests_per_slot: float = 150.0
    shuffle_period: int = 50
    shuffle_fraction: float = 0.2
    seed: int = 0
    poisson: bool = False

    def __post_init__(self):
        if self.n_services < 1 or self.horizon < 1:
            raise ValueError("n_services and horizon must be positive")
        if self.zipf_exponent <= 0:
            raise ValueError("zipf_exponent must be positive")
        if self.requests_per_slot <= 0:
            raise ValueError("requests_per_slot must be positive")
        if self.shuffle_period < 1:
            raise ValueError("shuffle_period must be a positive slot count")
        if not 0.0 <= self.shuffle_fraction <= 1.0:
            raise ValueError("shuffle_fraction must lie in [0, 1]")


def generate_trace(spec):
    """Materialize the full trace as a list of SlotArrivals.

    Deterministic in spec.seed. Without Poisson sampling every slot sums to
    exactly requests_per_slot, which therefore serves as the workload's
    arrival bound W.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_services
    # ranks[i] = popularity rank of service i (0 = hottest); starts at identity
    ranks = np.arange(n)
    weights = (np.arange(1, n + 1, dtype=float)) ** (-spec.zipf_exponent)
    weights /= weights.sum()

    slots = []
    for t in range(1, spec.horizon + 1):
        if t > 1 and (t - 1) % spec.shuffle_period == 0:
            k = int(np.ceil(spec.shuffle_fraction * n))
            if k >= 2:
                chosen = rng.choice(n, size=k, replace=False)
                ranks[chosen] = ranks[chosen[rng.permutation(k)]]
        rates = spec.requests_per_slot * weights[ranks]
        if spec.poisson:
            rates = rng.poisson(rates).astype(float)
        slots.append(SlotArrivals(rates=rates, slot_index=t))
    return slots


def trace_bound(slots):
    """Arrival bound W: the largest per-slot total over the trace."""
    return max(float(a.rates.sum()) for a in slots)


def write_trace(path, slots):
    """Write a trace in the CSV format; zero-rate entries are omitted."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(TRACE_HEADER + "\n")
        for a in slots:
            for n in np.flatnonzero(a.rates > 0):
                fh.write(f"{a.slot_index},{n},{float(a.rates[n])!r}\n")


def read_trace(path, n_services=None):
    """Read a trace file into dense per-slot arrival vectors.

    Missing (t, service) pairs are zero; missing slots are densified to
    all-zero vectors. Malformed or duplicate rows raise ValueError naming
    the offending line.
    """
    entries = {}
    max_t = 0
    max_n = -1
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != TRACE_HEADER:
            raise ValueError(f"line 1: expected header '{TRACE_HEADER}', got '{header}'")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(parts)}")
            try:
                t = int(parts[0])
                n = int(parts[1])
                lam = float(parts[2])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: non-numeric field ({exc})") from None
            if t < 1:
                raise ValueError(f"line {lineno}: slot index must be >= 1, got {t}")
            if n < 0:
                raise ValueError(f"line {lineno}: service id must be >= 0, got {n}")
            if lam < 0 or not np.isfinite(lam):
                raise ValueError(f"line {lineno}: arrival rate must be finite and >= 0")
            if (t, n) in entries:
                raise ValueError(f"line {lineno}: duplicate entry for slot {t}, service {n}")
            entries[(t, n)] = lam
            max_t = max(max_t, t)
            max_n = max(max_n, n)

    if n_services is None:
        n_services = max_n + 1
    if n_services < max_n + 1:
        raise ValueError(
            f"trace references service {max_n} but only {n_services} declared"
        )
    dense = np.zeros((max_t, n_services))
    for (t, n), lam in entries.items():
        dense[t - 1, n] = lam
    return [
        SlotArrivals(rates=dense[t - 1], slot_index=t) for t in range(1, max_t + 1)
    ]
