"""Randomized integer caching with K coupled sample paths.

Quantizes a fractional cache vector onto the 1/K grid, advances a set of K
binary sample paths to match its marginals exactly, and counts the 0 -> 1
flips against the 3K * ||delta||_+ installation bound.
"""

import numpy as np

from edgecache import SamplePathSet, quantize, realized_install_count, rocr_advance

rng = np.random.default_rng(7)
K, n, Z = 10, 6, 3

paths = SamplePathSet.initial(K, n, rng)
xq = np.zeros(n)
print(f"K = {K} paths, {n} services, capacity Z = {Z}")

for step, x in enumerate((
    np.array([0.93, 0.55, 0.31, 0.12, 0.0, 0.0]),
    np.array([0.98, 0.72, 0.05, 0.45, 0.31, 0.0]),
    np.array([0.40, 0.88, 0.02, 0.61, 0.66, 0.21]),
), start=1):
    xq_new = quantize(x, K, Z)
    new_paths = rocr_advance(paths, xq, xq_new, Z, rng)
    flips = realized_install_count(paths, new_paths)
    bound = 3 * int(np.rint(K * np.maximum(xq_new - xq, 0).sum()))
    print(f"\nstep {step}: target x  = {np.round(x, 2).tolist()}")
    print(f"        quantized  = {xq_new.tolist()}")
    print(f"        marginals  = {(new_paths.marginals() / K).tolist()}  (exact)")
    print(f"        flips {flips} <= bound {bound},"
          f" repair swaps {new_paths.last_rebalance_iters}")
    paths, xq = new_paths, xq_new

active = paths.active_vector()
print(f"\nactive path {paths.active_path} installs cache {active.astype(int).tolist()}"
      f" ({int(active.sum())}/{Z} slots used)")
