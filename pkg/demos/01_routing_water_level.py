"""Water-filling structure of the per-slot routing optimum.

Routes one slot of traffic for a hand-sized catalog and prints how the
marginal edge latency J rises as services are admitted in descending order
of forwarding latency, until J meets the next service's d_n.
"""

import numpy as np

from edgecache import MM1Latency, ServiceCatalog, SlotArrivals, service_routing, verify_kkt

catalog = ServiceCatalog(forwarding_latency=np.array([4.0, 3.2, 2.6, 2.1]), capacity=3)
latency_fn = MM1Latency(phi=12.0)
arrivals = SlotArrivals(rates=np.array([5.0, 4.0, 3.0, 2.0]), slot_index=1)
x = np.array([1.0, 1.0, 0.8, 0.5])

out = service_routing(catalog, arrivals, latency_fn, x)

print("service   d_n   lambda   x_n    y_n     nu_n")
for n in range(4):
    print(f"   {n}     {catalog.forwarding_latency[n]:4.1f}   {arrivals.rates[n]:5.1f}"
          f"  {x[n]:4.2f}  {out.y[n]:5.3f}  {out.nu[n]:6.3f}")

J = latency_fn.marginal(out.edge_load)
print(f"\nedge load {out.edge_load:.4f} of phi={latency_fn.phi}, water level J = {J:.4f}")
print("services with d_n > J are fully admitted (y = x), the crossing service")
print("is throttled so J lands exactly on its d_n, the rest forward everything.")
print(f"\ntotal latency {out.objective:.4f}")
print("KKT system verified:", verify_kkt(out, catalog, arrivals, latency_fn, x))
