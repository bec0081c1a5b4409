"""Street-graph routing: travel times, snapping, geocoding."""

from .geo import AddressNotFound, Gazetteer, haversine_distance, normalize_address
from .graph import GraphFormatError, RoadGraph, load_road_graph, save_road_graph
from .times import (
    FALLBACK_EXCLUDE,
    FALLBACK_POLICIES,
    FALLBACK_STRAIGHT_LINE,
    UNREACHABLE,
    LocationResolutionError,
    TravelTimeMatrix,
    UnknownNode,
    build_travel_time_matrix,
    resolve_coordinate,
    shortest_times_from,
    straight_line_time,
    travel_time,
)

__all__ = [
    "AddressNotFound",
    "FALLBACK_EXCLUDE",
    "FALLBACK_POLICIES",
    "FALLBACK_STRAIGHT_LINE",
    "Gazetteer",
    "GraphFormatError",
    "LocationResolutionError",
    "RoadGraph",
    "TravelTimeMatrix",
    "UNREACHABLE",
    "UnknownNode",
    "build_travel_time_matrix",
    "haversine_distance",
    "load_road_graph",
    "normalize_address",
    "resolve_coordinate",
    "save_road_graph",
    "shortest_times_from",
    "straight_line_time",
    "travel_time",
]
