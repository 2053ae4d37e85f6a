from .lines import LineModel, fit_line, intersect
from .grouping import Cluster, GroupingParams, GroupingResult, group_points
from .walls import WallModel, extract_walls
from .evaluate import ErrorReport, evaluate_map, locate_gas_peaks

__all__ = [
    "LineModel", "fit_line", "intersect",
    "Cluster", "GroupingParams", "GroupingResult", "group_points",
    "WallModel", "extract_walls",
    "ErrorReport", "evaluate_map", "locate_gas_peaks",
]
