"""Quantization and randomized integer caching via K coupled sample paths.

A fractional cache vector is first snapped onto the grid of multiples of 1/K.
The randomized scheme maintains K binary cache vectors ("sample paths"), each
carrying probability mass 1/K, whose per-service column sums always equal
K times the quantized fractional value. One uniformly chosen path is the
cache actually installed; flips from 0 to 1 on that path are the realized
installation events.
"""

from dataclasses import dataclass, field

import numpy as np


def quantize(x, K, Z):
    """Round x onto the 1/K grid, preserving the capacity constraint.

    Largest-remainder rounding: floor each K*x_n, then hand the remaining
    units (capped at K*Z in total) to the coordinates with the largest
    fractional remainders, ties broken by ascending index. The result moves
    each coordinate by at most 1/K.
    """
    x = np.asarray(x, dtype=float)
    scaled = K * x
    floors = np.floor(scaled + 1e-9)
    total_units = min(int(np.floor(scaled.sum() + 0.5)), K * Z)
    extras = total_units - int(floors.sum())
    if extras > 0:
        remainders = scaled - floors
        # coordinates already at K units cannot take another
        remainders[floors >= K] = -np.inf
        take = np.lexsort((np.arange(x.size), -remainders))[:extras]
        floors[take] += 1
    return floors / K


@dataclass
class SamplePathSet:
    """K binary cache vectors with exact per-service marginals.

    r has shape (K, N); r[k, n] == 1 iff path k caches service n. active_path
    indexes the path whose caches are actually installed. last_rebalance_iters
    records how many capacity-repair swaps the most recent advance needed.
    """

    r: np.ndarray
    active_path: int
    last_rebalance_iters: int = 0

    @classmethod
    def initial(cls, K, n_services, rng):
        """All-empty paths; the active path is drawn uniformly once."""
        r = np.zeros((K, n_services), dtype=np.int8)
        return cls(r=r, active_path=int(rng.integers(K)))

    @property
    def K(self):
        return self.r.shape[0]

    def marginals(self):
        """Per-service column sums, in path units (0..K)."""
        return self.r.sum(axis=0)

    def active_vector(self):
        """The installed binary cache vector, as floats for the router."""
        return self.r[self.active_path].astype(float)


def _units(xq, K):
    units = np.rint(K * np.asarray(xq, dtype=float)).astype(np.int64)
    if np.any(np.abs(K * np.asarray(xq, dtype=float) - units) > 1e-6):
        raise ValueError("cache vector is not on the 1/K grid")
    return units


def rocr_advance(paths, xq_old, xq_new, Z, rng):
    """Move the sample paths from marginals K*xq_old to K*xq_new.

    For each service whose quantized probability rose by delta, K*delta paths
    currently without it are chosen uniformly at random and flip to 1 (and
    symmetrically for drops). Paths pushed over the capacity Z then donate one
    of their services to an under-capacity path until all paths are feasible;
    that repair loop runs at most K*Z times.
    """
    K = paths.K
    old_units = _units(xq_old, K)
    new_units = _units(xq_new, K)
    if not np.array_equal(paths.marginals(), old_units):
        raise ValueError("sample-path marginals inconsistent with xq_old")

    r = paths.r.copy()
    delta = new_units - old_units
    for n in np.flatnonzero(delta):
        du = int(delta[n])
        if du > 0:
            eligible = np.flatnonzero(r[:, n] == 0)
            picked = rng.permutation(eligible)[:du]
            r[picked, n] = 1
        else:
            eligible = np.flatnonzero(r[:, n] == 1)
            picked = rng.permutation(eligible)[:-du]
            r[picked, n] = 0

    row_sums = r.sum(axis=1)
    iters = 0
    max_iters = K * Z
    while True:
        over = np.flatnonzero(row_sums > Z)
        if over.size == 0:
            break
        if iters >= max_iters:
            raise RuntimeError("capacity repair failed to terminate in K*Z swaps")
        k_hat = int(over[0])
        under = np.flatnonzero(row_sums < Z)
        if under.size == 0:
            raise RuntimeError("no under-capacity path available for repair")
        k_prime = int(under[0])
        movable = np.flatnonzero((r[k_hat] == 1) & (r[k_prime] == 0))
        if movable.size == 0:
            raise RuntimeError("no swappable service between repair paths")
        n_hat = int(movable[0])
        r[k_hat, n_hat] = 0
        r[k_prime, n_hat] = 1
        row_sums[k_hat] -= 1
        row_sums[k_prime] += 1
        iters += 1

    return SamplePathSet(
        r=r, active_path=paths.active_path, last_rebalance_iters=iters
    )


def realized_install_count(paths_before, paths_after, path_index=None):
    """Number of 0 -> 1 flips between two path sets.

    With path_index given, counts flips on that single path (the realized
    installations when it is the active one); otherwise counts flips across
    all K paths, whose total is bounded by 3K * ||xq_new - xq_old||_+.
    """
    before = paths_before.r
    after = paths_after.r
    if before.shape != after.shape:
        raise ValueError("path sets must have the same shape")
    if path_index is not None:
        before = before[path_index]
        after = after[path_index]
    return int(np.sum((after == 1) & (before == 0)))
