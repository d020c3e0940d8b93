"""Exact solver for the per-slot request routing problem.

Given a cache vector x, arrival rates lambda and a convex latency model, the
routing problem minimizes total latency over 0 <= y <= x. The optimum has a
water-filling structure: serve services in descending order of forwarding
latency d_n fully at the edge until the marginal edge latency J(s) reaches
d_n, then stop. The same pass yields the KKT multipliers and hence a
subgradient of the optimal value G(x) with respect to x, at no extra cost.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .model import eval_latency_cost

# tolerance scale for the water-level root find
WATER_LEVEL_RTOL = 1e-10


@dataclass(frozen=True)
class RoutingOutcome:
    """Optimal routing plus multipliers and the subgradient of G at x."""

    y: np.ndarray            # optimal routing fractions, original service order
    nu: np.ndarray           # multipliers of y <= x
    mu: np.ndarray           # multipliers of y >= 0
    objective: float         # minimal total latency G(x)
    subgradient: np.ndarray  # dG/dx = -nu, elementwise <= 0
    edge_load: float         # total load routed to the edge


def solve_water_level(latency_fn, base_load, lambda_n, x_n, target_d):
    """Find y in (0, x_n) with marginal(base_load + lambda_n * y) == target_d.

    Uses the latency model's closed-form inverse when available, bisection
    otherwise. Caller must guarantee the bracket:
    marginal(base_load) < target_d < marginal(base_load + lambda_n * x_n).
    """
    if latency_fn.marginal(base_load) >= target_d:
        raise RuntimeError("water-level bracket violated at base load")
    s_star = latency_fn.load_at_marginal(target_d)
    if s_star is not None:
        y = (s_star - base_load) / lambda_n
        return min(max(y, 0.0), x_n)

    def gap(y):
        return latency_fn.marginal(base_load + lambda_n * y) - target_d

    hi = x_n
    if not np.isfinite(gap(hi)):
        # pull the upper end strictly inside the load ceiling
        hi = min(x_n, (latency_fn.load_ceiling - base_load) / lambda_n * (1 - 1e-12))
    if gap(hi) <= 0:
        raise RuntimeError("water-level bracket violated at full allocation")
    return brentq(gap, 0.0, hi, xtol=1e-14, rtol=8.9e-16, maxiter=200)


def service_routing(catalog, arrivals, latency_fn, x):
    """Solve the slot routing problem and return routing plus subgradient.

    One greedy pass over services in descending-d order: fill y_n = x_n while
    the marginal J stays below d_n; at the crossing service, shrink y_n so
    J == d_n exactly; later services forward everything. A second vectorized
    pass computes the multipliers exactly as the water level dictates.
    """
    x = np.asarray(x, dtype=float)
    lam_all = arrivals.rates
    d_all = catalog.forwarding_latency
    order = catalog.order_desc

    y = np.zeros_like(x)
    s = 0.0
    J = float(latency_fn.marginal(0.0))
    for i in order:
        d_i = d_all[i]
        if J >= d_i:
            # J only grows and d only shrinks along the pass: all done
            break
        add = lam_all[i] * x[i]
        if add <= 0.0:
            # zero-rate or uncached service: full fraction is free and harmless
            y[i] = x[i]
            continue
        J_full = float(latency_fn.marginal(s + add))
        if J_full > d_i:
            y[i] = solve_water_level(latency_fn, s, lam_all[i], x[i], d_i)
            s += lam_all[i] * y[i]
            J = d_i
            break
        y[i] = x[i]
        s += add
        J = J_full

    slack = d_all - J
    nu = lam_all * np.maximum(slack, 0.0)
    mu = lam_all * np.maximum(-slack, 0.0)
    objective = eval_latency_cost(catalog, arrivals, latency_fn, y)
    return RoutingOutcome(
        y=y, nu=nu, mu=mu, objective=objective, subgradient=-nu, edge_load=s
    )


def verify_kkt(outcome, catalog, arrivals, latency_fn, x, tol=None):
    """Check stationarity, complementary slackness and dual feasibility.

    Returns True iff the outcome satisfies the routing problem's optimality
    system within tol at the reported edge load.
    """
    d = catalog.forwarding_latency
    lam = arrivals.rates
    if tol is None:
        tol = 1e-8 * (1.0 + float(np.max(d)))
    J = float(latency_fn.marginal(outcome.edge_load))
    stationarity = lam * (J - d) - outcome.mu + outcome.nu
    if np.max(np.abs(stationarity)) > tol:
        return False
    if np.max(np.abs(outcome.nu * (outcome.y - x))) > tol:
        return False
    if np.max(np.abs(outcome.mu * outcome.y)) > tol:
        return False
    if np.min(outcome.nu) < -tol or np.min(outcome.mu) < -tol:
        return False
    return True
