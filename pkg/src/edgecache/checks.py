"""Randomized self-check suites behind the ``validate`` CLI subcommand.

Each suite fuzzes one core component on random instances and checks its
defining invariants. The suites are quick smoke checks, not the full test
suite; they exist so a deployment can sanity-check a build without pytest.
"""

import numpy as np

from .caching import project_capped_box_simplex
from .model import MM1Latency, ServiceCatalog, SlotArrivals, eval_latency_cost
from .rounding import quantize, realized_install_count, rocr_advance, SamplePathSet
from .routing import service_routing, verify_kkt


def _random_instance(rng, n_max=10):
    n = int(rng.integers(2, n_max + 1))
    catalog = ServiceCatalog(
        forwarding_latency=rng.uniform(2.0, 4.0, size=n),
        capacity=int(rng.integers(1, n + 1)),
    )
    lam = rng.uniform(0.0, 1.0, size=n)
    lam *= rng.uniform(10.0, 50.0) / lam.sum()
    arrivals = SlotArrivals(rates=lam, slot_index=1)
    latency_fn = MM1Latency(phi=float(rng.uniform(20.0, 100.0)))
    x = rng.uniform(0.0, 1.0, size=n)
    if x.sum() > catalog.capacity:
        x *= catalog.capacity / x.sum()
    return catalog, arrivals, latency_fn, x


def check_routing(rng, rounds=50):
    """KKT validity and subgradient bound on random routing instances."""
    for _ in range(rounds):
        catalog, arrivals, latency_fn, x = _random_instance(rng)
        out = service_routing(catalog, arrivals, latency_fn, x)
        if not verify_kkt(out, catalog, arrivals, latency_fn, x):
            return False, "KKT check failed on a random instance"
        w = arrivals.rates.sum()
        bound = w ** 2 * np.max(catalog.forwarding_latency) ** 2
        if np.sum(out.subgradient ** 2) > bound * (1 + 1e-9):
            return False, "subgradient norm bound violated"
        direct = eval_latency_cost(catalog, arrivals, latency_fn, out.y)
        if abs(direct - out.objective) > 1e-9 * (1 + abs(direct)):
            return False, "objective disagrees with direct evaluation"
    return True, f"{rounds} random routing instances"


def check_projection(rng, rounds=100):
    """Feasibility and the variational inequality for the projection."""
    for _ in range(rounds):
        n = int(rng.integers(1, 21))
        Z = int(rng.integers(1, n + 1))
        v = rng.normal(0.0, 2.0, size=n)
        p = project_capped_box_simplex(v, Z)
        if np.any(p < -1e-9) or np.any(p > 1 + 1e-9) or p.sum() > Z + 1e-9:
            return False, "projection output infeasible"
        for _ in range(5):
            q = rng.uniform(0, 1, size=n)
            if q.sum() > Z:
                q *= Z / q.sum()
            if np.dot(v - p, q - p) > 1e-8:
                return False, "variational inequality violated"
    return True, f"{rounds} random projections"


def check_rounding(rng, rounds=200):
    """Marginal exactness, capacity and flip bound across path advances."""
    for _ in range(rounds):
        n = int(rng.integers(2, 30))
        K = int(rng.choice([4, 20, 100]))
        Z = int(rng.integers(1, min(n, 10) + 1))
        paths = SamplePathSet.initial(K, n, rng)
        xq = np.zeros(n)
        for _ in range(5):
            x = rng.uniform(0, 1, size=n)
            if x.sum() > Z:
                x *= Z / x.sum()
            xq_new = quantize(x, K, Z)
            new_paths = rocr_advance(paths, xq, xq_new, Z, rng)
            if not np.array_equal(
                new_paths.marginals(), np.rint(K * xq_new).astype(int)
            ):
                return False, "path marginals drifted from quantized vector"
            if np.any(new_paths.r.sum(axis=1) > Z):
                return False, "a sample path exceeds capacity"
            flips = realized_install_count(paths, new_paths)
            bound = 3 * K * np.maximum(xq_new - xq, 0).sum()
            if flips > bound + 1e-9:
                return False, "flip count exceeds the 3K bound"
            paths, xq = new_paths, xq_new
    return True, f"{rounds} random path transitions"


SUITES = (
    ("routing", check_routing),
    ("projection", check_projection),
    ("rounding", check_rounding),
)


def run_all(seed=0):
    """Run every suite; returns (all_passed, report_lines)."""
    lines = []
    ok = True
    for name, fn in SUITES:
        passed, detail = fn(np.random.default_rng(seed))
        ok = ok and passed
        status = "PASS" if passed else "FAIL"
        lines.append(f"{status} {name}: {detail}")
    return ok, lines
