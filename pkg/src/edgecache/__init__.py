"""Online joint service caching and request routing at an edge server.

A numpy library implementing an exact water-filling solver for the per-slot
request routing problem (which also yields a subgradient of the optimal
latency with respect to the cache vector), online gradient descent with lazy
projection onto the capped box simplex for the caching decision, a
sample-path randomized rounding scheme producing integer caches with exact
marginals, baseline and offline comparator policies, synthetic Zipf workload
generation, and a CSV-emitting experiment harness.
"""

from .caching import CacherState, caching_update, project_capped_box_simplex
from .harness import (
    ExperimentConfig,
    build_catalog,
    materialize_trace,
    run_experiment,
    run_single,
    run_sweep,
)
from .model import (
    CostParams,
    LatencyFunction,
    LoadCeilingError,
    MM1Latency,
    ServiceCatalog,
    SlotArrivals,
    eval_latency_cost,
    eval_marginal,
    validate_latency_pairing,
)
from .policies import (
    OCRPolicy,
    OfflinePolicy,
    OGAPolicy,
    PolicyStepRecord,
    ROCRPolicy,
    regret_series,
    solve_offline_static,
)
from .rounding import (
    SamplePathSet,
    quantize,
    realized_install_count,
    rocr_advance,
)
from .routing import RoutingOutcome, service_routing, solve_water_level, verify_kkt
from .workload import (
    WorkloadSpec,
    generate_trace,
    read_trace,
    trace_bound,
    write_trace,
)

__version__ = "0.1.0"
