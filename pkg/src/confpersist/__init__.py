"""Hard-sphere configuration spaces: persistence and regular-embedding obstructions."""

__version__ = "0.1.0"

from .complex import (  # noqa: E402
    FilteredComplex,
    build_independence_filtration,
    configuration_boundary,
    delta_check,
    face_map,
    separation,
    sigma_action,
)
from .covering import build_config_rips, matching_bijection, verify_covering, w1  # noqa: E402
from .metric import (  # noqa: E402
    FiniteMetricSpace,
    WeightedGraph,
    cycle_graph,
    metric_inheritance_check,
    sample_circle,
    shortest_path_metric,
    subdivide,
)
from .obstruction import bockstein_c1, obstruction_report, sw_power_max_t  # noqa: E402
from .packing import conf_nonempty, max_packing_radius  # noqa: E402
from .persistence import betti_at, compute_persistence, cup_product, is_coboundary  # noqa: E402
from .regular import (  # noqa: E402
    SampledMap,
    is_affine_kr_regular,
    is_kr_regular,
    realization_check,
    restrict_map,
)
from .estimators import BettiCurve, HardSpherePersistence, PackingRadius, RegularityObstruction  # noqa: E402
