"""Online gradient descent with lazy projection for the caching decision.

The cache iterate x lives in the capped box simplex
F = {x : 0 <= x_n <= 1, sum(x) <= Z}. The learner accumulates raw
(sub)gradients in an internal vector theta and projects eta * theta onto F
after every update, rather than stepping from the previous projected point.
"""

from dataclasses import dataclass

import numpy as np

# absolute tolerance on the sum constraint when solving the shifted clip
PROJECTION_SUM_ATOL = 1e-12


def project_capped_box_simplex(v, Z):
    """Euclidean projection of v onto {x : 0 <= x_n <= 1, sum(x) <= Z}.

    Clipping to the box solves the problem whenever the clipped point already
    satisfies the sum constraint. Otherwise the projection lies on the
    hyperplane sum(x) = Z and has the shifted-clip form
    x_n = clip(v_n - tau, 0, 1) for the tau making the sum equal Z; that tau
    is found exactly by a breakpoint scan (sum(x(tau)) is piecewise linear,
    continuous and nonincreasing in tau).
    """
    v = np.asarray(v, dtype=float)
    clipped = np.clip(v, 0.0, 1.0)
    if clipped.sum() <= Z:
        return clipped

    n = v.size
    vs = np.sort(v)
    cums = np.concatenate(([0.0], np.cumsum(vs)))

    def shifted_sums(taus):
        # sum of clip(v - tau, 0, 1) at each tau, via the sorted order
        lo = np.searchsorted(vs, taus, side="right")
        hi = np.searchsorted(vs, taus + 1.0, side="right")
        mid = cums[hi] - cums[lo] - taus * (hi - lo)
        return mid + (n - hi)

    bps = np.unique(np.concatenate((v - 1.0, v)))
    g = shifted_sums(bps)
    # first breakpoint where the sum has dropped to <= Z
    idx = int(np.searchsorted(-g, -Z, side="left"))
    if idx == 0:
        tau = bps[0]
    elif abs(g[idx] - Z) <= PROJECTION_SUM_ATOL:
        tau = bps[idx]
    else:
        slope = (g[idx] - g[idx - 1]) / (bps[idx] - bps[idx - 1])
        tau = bps[idx - 1] + (Z - g[idx - 1]) / slope
    return np.clip(v - tau, 0.0, 1.0)


@dataclass(frozen=True)
class CacherState:
    """Lazy-projection learner state: accumulator theta and cache vector x."""

    theta: np.ndarray
    x: np.ndarray
    eta: float

    @classmethod
    def initial(cls, n_services, eta):
        """Fresh state: zero accumulator, empty cache."""
        if eta <= 0:
            raise ValueError("step size eta must be positive")
        zeros = np.zeros(n_services)
        return cls(theta=zeros, x=zeros.copy(), eta=eta)


def caching_update(state, subgradient, Z):
    """One lazy-projection descent step; returns the successor state."""
    subgradient = np.asarray(subgradient, dtype=float)
    theta = state.theta - subgradient
    x = project_capped_box_simplex(state.eta * theta, Z)
    return CacherState(theta=theta, x=x, eta=state.eta)
