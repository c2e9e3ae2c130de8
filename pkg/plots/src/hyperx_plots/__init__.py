from .curves import ci_halfwidth, curve_data, learning_curve
from .io import RunSet, read_config, read_log, read_metrics, read_traces
from .success import success_bars, success_data
from .traces import trace_map

__all__ = [
    "ci_halfwidth", "curve_data", "learning_curve", "RunSet", "read_config",
    "read_log", "read_metrics", "read_traces", "success_bars", "success_data",
    "trace_map",
]
