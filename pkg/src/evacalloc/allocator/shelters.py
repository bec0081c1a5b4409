"""Destination choice: send each served point's evacuees to nearby shelters.

The solver's objective covers only vehicle-to-point travel; shelter legs are
reported, not optimized.  Served points are processed in priority order and
their evacuees (people counts, not seat-equivalents) go to the nearest
shelter by travel time that still has room.  A point splits across shelters
only when no single one can take it, filling nearest-first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..kb.entities import Shelter
from ..routing.graph import RoadGraph
from ..routing.times import FALLBACK_EXCLUDE, shortest_times_from, straight_line_time
from .model import AllocationInstance, AllocationPlan


@dataclass(frozen=True)
class ShelterLeg:
    shelter_id: str
    persons: int
    time_s: float


@dataclass
class ShelterAssignment:
    by_point: dict[str, list[ShelterLeg]]
    occupancy: dict[str, int]            # shelter id -> occupied after assignment
    diagnostics: list[str] = field(default_factory=list)


def assign_shelters(
    plan: AllocationPlan,
    instance: AllocationInstance,
    shelters: list[Shelter],
    graph: RoadGraph,
    fallback: str = "straight-line",
    gazetteer=None,
) -> ShelterAssignment:
    from ..routing.times import resolve_coordinate

    shelters = sorted(shelters, key=lambda s: s.id)
    remaining = {s.id: s.capacity - s.occupied for s in shelters}
    occupancy = {s.id: s.occupied for s in shelters}
    diagnostics: list[str] = []
    by_point: dict[str, list[ShelterLeg]] = {}

    if not shelters:
        served_any = any(out.served and out.demand > 0 for out in plan.per_point)
        if served_any:
            diagnostics.append("shelter_capacity_exhausted: no shelters known")
        return ShelterAssignment(by_point={}, occupancy={}, diagnostics=diagnostics)

    shelter_coords = {s.id: resolve_coordinate(s, gazetteer) for s in shelters}
    shelter_nodes = {s.id: graph.snap_to_node(shelter_coords[s.id]) for s in shelters}
    points = {p.id: p for p in instance.points}

    for outcome in plan.per_point:  # already priority-ordered
        if not outcome.served:
            continue
        point = points[outcome.point_id]
        evacuees = point.nb_people + point.nb_disabled
        if evacuees == 0:
            continue
        coord = resolve_coordinate(point, gazetteer)
        source = graph.snap_to_node(coord)
        dist = shortest_times_from(graph, source)

        legs: list[tuple[float, str]] = []
        for s in shelters:
            t = dist[shelter_nodes[s.id]]
            if math.isinf(t):
                if fallback == FALLBACK_EXCLUDE:
                    continue
                t = straight_line_time(coord, shelter_coords[s.id])
            legs.append((t, s.id))
        legs.sort()

        chosen: list[ShelterLeg] = []
        whole = next((leg for leg in legs if remaining[leg[1]] >= evacuees), None)
        if whole is not None:
            t, sid = whole
            chosen.append(ShelterLeg(sid, evacuees, t))
        else:
            left = evacuees
            for t, sid in legs:
                if left == 0:
                    break
                take = min(left, remaining[sid])
                if take > 0:
                    chosen.append(ShelterLeg(sid, take, t))
                    left -= take
            if left > 0:
                diagnostics.append(
                    f"shelter_capacity_exhausted: {point.id} has {left} evacuee(s) without a shelter place"
                )
        for leg in chosen:
            remaining[leg.shelter_id] -= leg.persons
            occupancy[leg.shelter_id] += leg.persons
        by_point[point.id] = chosen

    return ShelterAssignment(by_point=by_point, occupancy=occupancy, diagnostics=diagnostics)
