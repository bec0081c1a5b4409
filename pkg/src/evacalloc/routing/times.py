"""Shortest-path travel times and the rescue-point x resource time matrix.

Edge weight is ``length_m / (speed_kmh / 3.6)`` seconds.  Dijkstra is exact
(label-setting); the allocator's optimality guarantees depend on that, so no
approximate routing is allowed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from heapq import heappop, heappush

from ..kb.entities import MovingResource, RescuePoint
from ..kb.schema import VehicleClass
from .geo import Coordinate, haversine_distance
from .graph import RoadGraph

UNREACHABLE = math.inf

# Straight-line fallback speed matches the default edge speed on purpose:
# one conservative urban constant for everything off the road graph.
FALLBACK_SPEED_MS = 30.0 / 3.6

FALLBACK_STRAIGHT_LINE = "straight-line"
FALLBACK_EXCLUDE = "exclude"
FALLBACK_POLICIES = (FALLBACK_STRAIGHT_LINE, FALLBACK_EXCLUDE)


class UnknownNode(KeyError):
    pass


def shortest_times_from(graph: RoadGraph, source: str) -> dict[str, float]:
    """Single-source Dijkstra; unreachable nodes map to ``math.inf``."""
    if source not in graph.nodes:
        raise UnknownNode(source)
    adjacency = graph.adjacency()
    dist = {n: UNREACHABLE for n in graph.nodes}
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, node = heappop(heap)
        if node in done:
            continue
        done.add(node)
        for neighbor, weight in adjacency[node]:
            nd = d + weight
            if nd < dist[neighbor]:
                dist[neighbor] = nd
                heappush(heap, (nd, neighbor))
    return dist


def travel_time(graph: RoadGraph, from_node: str, to_node: str) -> float:
    """Shortest-path seconds between two nodes; ``math.inf`` when no path."""
    if from_node not in graph.nodes:
        raise UnknownNode(from_node)
    if to_node not in graph.nodes:
        raise UnknownNode(to_node)
    if from_node == to_node:
        return 0.0
    return shortest_times_from(graph, from_node)[to_node]


def straight_line_time(a: Coordinate, b: Coordinate) -> float:
    return haversine_distance(a, b) / FALLBACK_SPEED_MS


class LocationResolutionError(ValueError):
    """A resource or point cannot be placed on the map."""

    def __init__(self, entity_id: str, code: str, message: str):
        super().__init__(f"{entity_id}: {message}")
        self.entity_id = entity_id
        self.code = code


def resolve_coordinate(entity, gazetteer=None) -> Coordinate:
    """Coordinates for an entity, geocoding its address when needed."""
    if entity.location is not None:
        return entity.location
    if entity.address is not None:
        if gazetteer is None:
            raise LocationResolutionError(entity.id, "geocode_failure", "no gazetteer loaded to geocode the address")
        try:
            return gazetteer.geocode_address(entity.address)
        except KeyError:
            raise LocationResolutionError(
                entity.id, "geocode_failure", f"address not found: {entity.address!r}"
            ) from None
    raise LocationResolutionError(entity.id, "missing_location", "entity has neither coordinates nor an address")


@dataclass
class TravelTimeMatrix:
    """Seconds from each moving resource to each rescue point.

    ``times[u][v]`` is the trip for resource ``v`` (column) to point ``u``
    (row); ``math.inf`` marks an excluded/unreachable pair.
    """

    point_ids: list[str]
    resource_ids: list[str]
    times: list[list[float]]
    notices: list[str] = field(default_factory=list)

    def entry(self, point_id: str, resource_id: str) -> float:
        return self.times[self.point_ids.index(point_id)][self.resource_ids.index(resource_id)]


def build_travel_time_matrix(
    graph: RoadGraph,
    resources: list[MovingResource],
    points: list[RescuePoint],
    fallback: str = FALLBACK_STRAIGHT_LINE,
    gazetteer=None,
) -> TravelTimeMatrix:
    """Snap every entity to the graph and fill the matrix with Dijkstra times.

    Unreachable pairs get the straight-line estimate at 30 km/h under the
    ``straight-line`` policy, or stay unreachable under ``exclude``.  Boats
    never use the road graph: water routes are not mapped, so they always get
    the straight-line estimate.
    """
    if fallback not in FALLBACK_POLICIES:
        raise ValueError(f"unknown fallback policy {fallback!r}")
    notices: list[str] = []

    point_coords = [resolve_coordinate(p, gazetteer) for p in points]
    resource_coords = [resolve_coordinate(r, gazetteer) for r in resources]
    point_nodes = [graph.snap_to_node(c) for c in point_coords]

    times = [[UNREACHABLE] * len(resources) for _ in points]
    for v, resource in enumerate(resources):
        if resource.vehicle_class is VehicleClass.BOAT:
            for u in range(len(points)):
                times[u][v] = straight_line_time(resource_coords[v], point_coords[u])
            notices.append(f"resource {resource.id}: boat, straight-line times used")
            continue
        source = graph.snap_to_node(resource_coords[v])
        dist = shortest_times_from(graph, source)
        for u in range(len(points)):
            t = dist[point_nodes[u]]
            if math.isinf(t):
                if fallback == FALLBACK_STRAIGHT_LINE:
                    t = straight_line_time(resource_coords[v], point_coords[u])
                else:
                    notices.append(f"resource {resource.id}: no route to {points[u].id}, excluded")
            times[u][v] = t
    return TravelTimeMatrix(
        point_ids=[p.id for p in points],
        resource_ids=[r.id for r in resources],
        times=times,
        notices=notices,
    )
