"""Per-slot caching/routing policies and regret accounting.

All online policies share one stepping interface: feed the slot's arrivals,
get back a PolicyStepRecord with the latency and installation cost actually
charged for that slot. The offline comparator is the static policy that
caches the services with the largest d_n * total popularity and routes
optimally each slot; it never pays installation cost.
"""

from dataclasses import dataclass

import numpy as np

from .caching import CacherState, caching_update
from .model import check_cache_vector
from .rounding import SamplePathSet, quantize, realized_install_count, rocr_advance
from .routing import service_routing


@dataclass(frozen=True)
class PolicyStepRecord:
    """Costs charged and decisions used in one slot."""

    slot: int
    latency_cost: float
    install_cost: float
    cache: np.ndarray
    routing: np.ndarray
    # ROCR only: install cost averaged over all sample paths
    expected_install_cost: float | None = None

    @property
    def total_cost(self):
        return self.latency_cost + self.install_cost


def _positive_part_sum(delta):
    return float(np.maximum(delta, 0.0).sum())


class OCRPolicy:
    """Two-stage fractional policy: optimal routing + lazy-projection descent.

    Routes each slot optimally for the current fractional cache, then feeds
    the router's subgradient to the lazy-projection learner to produce the
    next slot's cache. Starts from an empty cache.
    """

    name = "OCR"

    def __init__(self, catalog, latency_fn, beta, eta):
        self.catalog = catalog
        self.latency_fn = latency_fn
        self.beta = beta
        self.state = CacherState.initial(catalog.n_services, eta)
        self._prev_cache = np.zeros(catalog.n_services)
        self._slot = 0

    def step(self, arrivals):
        self._slot += 1
        x = self.state.x
        install = self.beta * _positive_part_sum(x - self._prev_cache)
        out = service_routing(self.catalog, arrivals, self.latency_fn, x)
        record = PolicyStepRecord(
            slot=self._slot,
            latency_cost=out.objective,
            install_cost=install,
            cache=x,
            routing=out.y,
        )
        self._prev_cache = x
        self.state = caching_update(self.state, out.subgradient, self.catalog.capacity)
        return record


class OGAPolicy:
    """Baseline: same plumbing as OCR but descends on -[lambda_n * d_n].

    The caching update ignores the edge's computation limit entirely; routing
    still uses the optimal per-slot router so the baseline is evaluated at
    its best.
    """

    name = "OGA"

    def __init__(self, catalog, latency_fn, beta, eta):
        self.catalog = catalog
        self.latency_fn = latency_fn
        self.beta = beta
        self.state = CacherState.initial(catalog.n_services, eta)
        self._prev_cache = np.zeros(catalog.n_services)
        self._slot = 0

    def step(self, arrivals):
        self._slot += 1
        x = self.state.x
        install = self.beta * _positive_part_sum(x - self._prev_cache)
        out = service_routing(self.catalog, arrivals, self.latency_fn, x)
        record = PolicyStepRecord(
            slot=self._slot,
            latency_cost=out.objective,
            install_cost=install,
            cache=x,
            routing=out.y,
        )
        self._prev_cache = x
        popularity_gradient = -arrivals.rates * self.catalog.forwarding_latency
        self.state = caching_update(
            self.state, popularity_gradient, self.catalog.capacity
        )
        return record


class ROCRPolicy:
    """Randomized integer variant of OCR built on K coupled sample paths.

    Each slot routes with the active path's binary cache. The subgradient is
    taken at that binary cache (set gradient_at_quantized=True to evaluate it
    at the quantized fractional vector instead). The learner's new fractional
    cache is quantized to the 1/K grid and the sample paths advance to match
    its marginals; installation cost is the realized 0 -> 1 flips on the
    active path times beta.
    """

    name = "ROCR"

    def __init__(self, catalog, latency_fn, beta, eta, K, rng,
                 gradient_at_quantized=False):
        self.catalog = catalog
        self.latency_fn = latency_fn
        self.beta = beta
        self.K = K
        self.rng = rng
        self.gradient_at_quantized = gradient_at_quantized
        self.state = CacherState.initial(catalog.n_services, eta)
        self.paths = SamplePathSet.initial(K, catalog.n_services, rng)
        self.xq = np.zeros(catalog.n_services)
        self._slot = 0
        self._pending_install = 0.0
        self._pending_expected_install = 0.0

    def step(self, arrivals):
        self._slot += 1
        active = self.paths.active_vector()
        out = service_routing(self.catalog, arrivals, self.latency_fn, active)
        if self.gradient_at_quantized:
            grad = service_routing(
                self.catalog, arrivals, self.latency_fn, self.xq
            ).subgradient
        else:
            grad = out.subgradient
        record = PolicyStepRecord(
            slot=self._slot,
            latency_cost=out.objective,
            install_cost=self._pending_install,
            cache=active,
            routing=out.y,
            expected_install_cost=self._pending_expected_install,
        )
        self.state = caching_update(self.state, grad, self.catalog.capacity)
        xq_new = quantize(self.state.x, self.K, self.catalog.capacity)
        new_paths = rocr_advance(
            self.paths, self.xq, xq_new, self.catalog.capacity, self.rng
        )
        active_flips = realized_install_count(
            self.paths, new_paths, self.paths.active_path
        )
        total_flips = realized_install_count(self.paths, new_paths)
        self._pending_install = self.beta * active_flips
        self._pending_expected_install = self.beta * total_flips / self.K
        self.paths = new_paths
        self.xq = xq_new
        return record


class OfflinePolicy:
    """The static comparator: fixed binary cache, optimal per-slot routing."""

    name = "OFF"

    def __init__(self, catalog, latency_fn, x_static):
        self.catalog = catalog
        self.latency_fn = latency_fn
        self.x_static = check_cache_vector(x_static, catalog)
        self._slot = 0

    def step(self, arrivals):
        self._slot += 1
        out = service_routing(self.catalog, arrivals, self.latency_fn, self.x_static)
        return PolicyStepRecord(
            slot=self._slot,
            latency_cost=out.objective,
            install_cost=0.0,
            cache=self.x_static,
            routing=out.y,
        )


def solve_offline_static(catalog, trace):
    """Best static binary cache: top services by d_n * total arrivals.

    Only services with positive score are cached, ties broken by ascending
    index, at most Z in total.
    """
    trace = list(trace)
    if not trace:
        raise ValueError("cannot solve the offline policy on an empty trace")
    totals = np.sum([a.rates for a in trace], axis=0)
    scores = catalog.forwarding_latency * totals
    order = np.lexsort((np.arange(scores.size), -scores))
    x = np.zeros(scores.size)
    picked = [i for i in order[: catalog.capacity] if scores[i] > 0]
    x[picked] = 1.0
    return x


def regret_series(records, offline_latency):
    """Cumulative regret Reg(t) and the per-slot series Reg(t)/t.

    records: one PolicyStepRecord per slot from the online policy.
    offline_latency: the comparator's per-slot optimal latency costs.
    """
    offline_latency = np.asarray(offline_latency, dtype=float)
    if len(records) != offline_latency.size:
        raise ValueError(
            f"horizon mismatch: {len(records)} policy slots vs "
            f"{offline_latency.size} offline slots"
        )
    per_slot = np.array(
        [r.latency_cost + r.install_cost for r in records]
    ) - offline_latency
    cum = np.cumsum(per_slot)
    t = np.arange(1, cum.size + 1)
    return cum, cum / t
