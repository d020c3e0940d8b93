"""Lazy-projection descent on the capped box simplex.

Shows the exact Euclidean projection onto {0 <= x <= 1, sum x <= Z} on a few
vectors, then runs the lazy learner on a fixed subgradient and watches the
accumulated score vector theta push the cache toward the best Z services.
"""

import numpy as np

from edgecache import CacherState, caching_update, project_capped_box_simplex

print("projection examples (Z = 2):")
for v in ([0.2, 0.3, 0.1], [0.9, 0.8, 0.7], [2.0, 2.0, 2.0], [1.5, 0.9, 0.1]):
    p = project_capped_box_simplex(np.array(v), 2)
    print(f"  {v} -> {np.round(p, 4).tolist()}  (sum {p.sum():.4f})")

# a fixed subgradient: services 0 and 3 are worth caching, the rest are not
g = np.array([-3.0, -0.4, -0.1, -2.5, 0.0])
state = CacherState.initial(5, eta=0.05)
print("\nlazy descent with constant subgradient", g.tolist(), " Z = 2")
print("slot   x")
for t in range(1, 16):
    state = caching_update(state, g, Z=2)
    if t in (1, 2, 3, 5, 10, 15):
        print(f" {t:3d}  {np.round(state.x, 3).tolist()}")
print("\nthe two services with the steepest descent direction saturate at 1,")
print("everything else is squeezed out by the capacity cap.")
