"""Bus network topology toolkit.

Builds route/stop graph spaces from bus feed snapshots, filters the
route-overlap space by shared-stop counts, computes the standard suite
of network metrics, compares two snapshots, and exports map layers.
"""

from .compare import ComparisonReport, QuantityDelta, compare_feeds, giant_share
from .errors import (
    BusnetError,
    EmptyGraph,
    IntegrityViolation,
    InvalidThreshold,
    MalformedNet,
    MalformedRow,
    MissingFile,
    SchemaViolation,
    UnknownRoute,
    UnknownStop,
)
from .feed import (
    Feed,
    FeedStats,
    ParseDiagnostics,
    Route,
    Stop,
    feed_stats,
    load_canonical,
    parse_gtfs,
    save_canonical,
)
from .geo import export_metric_layer, export_route_intensity
from .graph import BipartiteGraph, Graph
from .metrics import (
    ComponentReport,
    DegreeReport,
    DistanceReport,
    betweenness,
    closeness,
    degree_report,
    distance_report,
    giant_component,
    top_k,
)
from .pajek import read_pajek_net, write_pajek_net
from .spaces import build_b_space, build_c_space, build_p_space, threshold_c_space
from .synth import synthetic_feed

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "BusnetError",
    "ComparisonReport",
    "ComponentReport",
    "DegreeReport",
    "DistanceReport",
    "EmptyGraph",
    "Feed",
    "FeedStats",
    "Graph",
    "IntegrityViolation",
    "InvalidThreshold",
    "MalformedNet",
    "MalformedRow",
    "MissingFile",
    "ParseDiagnostics",
    "QuantityDelta",
    "Route",
    "SchemaViolation",
    "Stop",
    "UnknownRoute",
    "UnknownStop",
    "betweenness",
    "build_b_space",
    "build_c_space",
    "build_p_space",
    "closeness",
    "compare_feeds",
    "degree_report",
    "distance_report",
    "export_metric_layer",
    "export_route_intensity",
    "feed_stats",
    "giant_component",
    "giant_share",
    "load_canonical",
    "parse_gtfs",
    "read_pajek_net",
    "save_canonical",
    "synthetic_feed",
    "threshold_c_space",
    "top_k",
    "write_pajek_net",
]
