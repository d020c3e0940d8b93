"""Core problem types: service catalog, per-slot arrivals, latency models.

The system has N services. In each slot the edge server holds a (possibly
fractional) cache vector x with 0 <= x_n <= 1 and sum(x) <= Z. Requests for
service n arrive at rate lambda_n; a fraction y_n <= x_n is processed locally
and the rest is forwarded to the data center with per-request latency d_n.
Local processing latency per request is a convex increasing function C(s) of
the total edge load s = sum(lambda_n * y_n).
"""

from dataclasses import dataclass, field

import numpy as np


class LoadCeilingError(ValueError):
    """Total edge load at or above the latency model's admissible supremum."""

    def __init__(self, load, ceiling):
        self.load = load
        self.ceiling = ceiling
        super().__init__(
            f"edge load {load:.6g} >= admissible ceiling {ceiling:.6g}"
        )


class LatencyFunction:
    """Per-request computation latency as a function of total edge load.

    Subclasses implement c(s) and c_prime(s), valid on [0, load_ceiling).
    c must be convex, nondecreasing and differentiable there, and diverge
    as s approaches the ceiling (when the ceiling is finite).
    """

    load_ceiling = np.inf

    def c(self, s):
        raise NotImplementedError

    def c_prime(self, s):
        raise NotImplementedError

    def marginal(self, s):
        """Marginal latency c(s) + s*c'(s) of routing one more unit to the edge.

        Returns +inf at or beyond the load ceiling, so callers can compare
        against forwarding latencies without special-casing overload.
        """
        s = np.asarray(s, dtype=float)
        out = np.full(s.shape, np.inf)
        ok = s < self.load_ceiling
        if np.any(ok):
            sv = s[ok]
            out[ok] = self.c(sv) + sv * self.c_prime(sv)
        return out if out.ndim else float(out)

    def load_at_marginal(self, target):
        """Inverse of marginal(): load s with marginal(s) == target.

        Returns None when no closed form is available; callers fall back
        to bisection. Subclasses override when a closed form exists.
        """
        return None


@dataclass(frozen=True)
class MM1Latency(LatencyFunction):
    """M/M/1 queueing latency: c(s) = 1 / (phi - s) for s < phi."""

    phi: float

    def __post_init__(self):
        if self.phi <= 0:
            raise ValueError(f"service rate phi must be positive, got {self.phi}")

    @property
    def load_ceiling(self):
        return self.phi

    def c(self, s):
        return 1.0 / (self.phi - s)

    def c_prime(self, s):
        return 1.0 / (self.phi - s) ** 2

    def marginal(self, s):
        # closed form: phi / (phi - s)^2
        s = np.asarray(s, dtype=float)
        out = np.full(s.shape, np.inf)
        ok = s < self.phi
        out[ok] = self.phi / (self.phi - s[ok]) ** 2
        return out if out.ndim else float(out)

    def load_at_marginal(self, target):
        # phi / (phi - s)^2 = target  =>  s = phi - sqrt(phi / target)
        return self.phi - np.sqrt(self.phi / target)


@dataclass(frozen=True)
class ServiceCatalog:
    """Static problem instance: forwarding latencies d_n and cache capacity Z."""

    forwarding_latency: np.ndarray
    capacity: int

    def __post_init__(self):
        d = np.asarray(self.forwarding_latency, dtype=float)
        object.__setattr__(self, "forwarding_latency", d)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("forwarding_latency must be a nonempty 1-d vector")
        if not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise ValueError("all forwarding latencies must be finite and > 0")
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")
        # stable permutation sorting d descending, ties by ascending index
        order = np.lexsort((np.arange(d.size), -d))
        object.__setattr__(self, "_order_desc", order)

    @property
    def n_services(self):
        return self.forwarding_latency.size

    @property
    def order_desc(self):
        """Indices sorting services by d descending (ties: ascending index)."""
        return self._order_desc


@dataclass(frozen=True)
class SlotArrivals:
    """Arrival-rate vector for one slot."""

    rates: np.ndarray
    slot_index: int = 0

    def __post_init__(self):
        r = np.asarray(self.rates, dtype=float)
        object.__setattr__(self, "rates", r)
        if r.ndim != 1:
            raise ValueError("rates must be a 1-d vector")
        if not np.all(np.isfinite(r)) or np.any(r < 0):
            raise ValueError("arrival rates must be finite and >= 0")


@dataclass(frozen=True)
class CostParams:
    """Installation cost beta charged per newly cached service."""

    install_cost: float = 0.0

    def __post_init__(self):
        if self.install_cost < 0:
            raise ValueError("install_cost must be >= 0")


def validate_latency_pairing(catalog, latency_fn):
    """Check the model assumption 0 <= C(0) <= min_n d_n for this catalog."""
    c0 = float(latency_fn.c(0.0))
    dmin = float(np.min(catalog.forwarding_latency))
    if not (0.0 <= c0 <= dmin):
        raise ValueError(
            f"latency model invalid for catalog: need 0 <= C(0) <= min d "
            f"but C(0)={c0:.6g}, min d={dmin:.6g}"
        )


def check_cache_vector(x, catalog, tol=1e-9):
    """Validate a fractional cache vector against the catalog."""
    x = np.asarray(x, dtype=float)
    if x.shape != (catalog.n_services,):
        raise ValueError(f"cache vector has shape {x.shape}, expected ({catalog.n_services},)")
    if np.any(x < -tol) or np.any(x > 1 + tol):
        raise ValueError("cache vector entries must lie in [0, 1]")
    if x.sum() > catalog.capacity + tol:
        raise ValueError(
            f"cache vector sums to {x.sum():.6g} > capacity {catalog.capacity}"
        )
    return x


def check_routing_vector(y, x, tol=1e-9):
    """Validate a routing vector against its paired cache vector."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.shape != x.shape:
        raise ValueError("routing and cache vectors must have the same shape")
    if np.any(y < -tol) or np.any(y > x + tol):
        raise ValueError("routing vector must satisfy 0 <= y <= x elementwise")
    return y


def edge_load(arrivals, y):
    """Total edge computation load sum(lambda_n * y_n)."""
    return float(np.dot(arrivals.rates, y))


def eval_latency_cost(catalog, arrivals, latency_fn, y):
    """Total latency s*C(s) + sum(lambda_n * (1 - y_n) * d_n) of one slot.

    Raises LoadCeilingError if the edge load reaches the model's ceiling.
    """
    y = np.asarray(y, dtype=float)
    s = edge_load(arrivals, y)
    forwarded = float(np.dot(arrivals.rates * (1.0 - y), catalog.forwarding_latency))
    if s == 0.0:
        return forwarded
    if s >= latency_fn.load_ceiling:
        raise LoadCeilingError(s, latency_fn.load_ceiling)
    return s * float(latency_fn.c(s)) + forwarded


def eval_marginal(catalog, arrivals, latency_fn, y):
    """Marginal latency C(s) + s*C'(s) at the load implied by routing y."""
    s = edge_load(arrivals, y)
    if s >= latency_fn.load_ceiling:
        raise LoadCeilingError(s, latency_fn.load_ceiling)
    return float(latency_fn.marginal(s))
