"""End-to-end recommendation pipeline shared by the service and the CLI.

Takes materialized entities plus rescue-point specs, resolves coordinates,
builds the travel-time matrix and the allocation instance, solves, assigns
shelters, and serializes everything into the plan document that both the
HTTP API and the scenario runner emit.  Keeping one code path is what makes
the two surfaces produce identical documents for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .allocator import (
    DEFAULT_EXACT_CAP,
    STATUS_HEURISTIC,
    AllocationInstance,
    AllocationPlan,
    InstanceTooLarge,
    ShelterAssignment,
    assign_shelters,
    build_instance,
    solve_exact,
    solve_greedy,
)
from .kb.entities import MovingResource, RescuePoint, Shelter
from .routing.geo import Gazetteer
from .routing.graph import RoadGraph
from .routing.times import (
    FALLBACK_POLICIES,
    FALLBACK_STRAIGHT_LINE,
    LocationResolutionError,
    build_travel_time_matrix,
)

SOLVER_CHOICES = ("auto", "exact", "greedy")


class PipelineError(ValueError):
    """Structured failure, rendered as a problem document by the service."""

    def __init__(self, code: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details or {}

    def problem(self) -> dict:
        return {"code": self.code, "message": self.message, "details": self.details}


@dataclass(frozen=True)
class PointSpec:
    """Decision-maker input for one rescue point."""

    nb_people: int
    nb_disabled: int = 0
    priority: int = 1
    id: str | None = None
    address: str | None = None
    location: tuple[float, float] | None = None

    def validate(self) -> list[str]:
        bad = []
        if self.nb_people < 0:
            bad.append("nb_people must be >= 0")
        if self.nb_disabled < 0:
            bad.append("nb_disabled must be >= 0")
        if self.nb_people + self.nb_disabled < 1:
            bad.append("nb_people + nb_disabled must be >= 1")
        if self.priority < 1:
            bad.append("priority must be >= 1 (1 = highest)")
        if self.address is None and self.location is None:
            bad.append("either address or location is required")
        return bad


@dataclass(frozen=True)
class SolveOptions:
    solver: str = "auto"
    fallback: str = FALLBACK_STRAIGHT_LINE
    exact_cap: int = DEFAULT_EXACT_CAP

    def validate(self) -> None:
        if self.solver not in SOLVER_CHOICES:
            raise PipelineError("validation_error", f"solver must be one of {SOLVER_CHOICES}")
        if self.fallback not in FALLBACK_POLICIES:
            raise PipelineError("validation_error", f"fallback must be one of {FALLBACK_POLICIES}")


def point_spec_from_dict(raw: dict) -> PointSpec:
    loc = raw.get("location")
    return PointSpec(
        nb_people=int(raw.get("nb_people", 0)),
        nb_disabled=int(raw.get("nb_disabled", 0)),
        priority=int(raw.get("priority", 1)),
        id=raw.get("id"),
        address=raw.get("address"),
        location=(float(loc["lat"]), float(loc["lon"])) if loc else None,
    )


def options_from_dict(raw: dict | None) -> SolveOptions:
    raw = raw or {}
    return SolveOptions(
        solver=raw.get("solver", "auto"),
        fallback=raw.get("fallback", FALLBACK_STRAIGHT_LINE),
        exact_cap=int(raw.get("exact_cap", DEFAULT_EXACT_CAP)),
    )


def specs_to_points(specs: list[PointSpec], gazetteer: Gazetteer | None) -> list[RescuePoint]:
    """Validate specs, geocode addresses, and mint RescuePoint_NN ids."""
    errors = {}
    for i, spec in enumerate(specs):
        bad = spec.validate()
        if bad:
            errors[spec.id or f"point #{i + 1}"] = bad
    if errors:
        raise PipelineError("validation_error", "invalid rescue point specs", {"fields": errors})

    points = []
    for i, spec in enumerate(specs):
        pid = spec.id or f"RescuePoint_{i + 1:02d}"
        location = spec.location
        if location is None:
            try:
                location = gazetteer.geocode_address(spec.address) if gazetteer else None
            except KeyError:
                location = None
            if location is None:
                raise PipelineError(
                    "geocode_failure",
                    f"address of {pid} cannot be geocoded and no coordinates were given",
                    {"entity_id": pid, "address": spec.address},
                )
        points.append(
            RescuePoint(
                id=pid,
                nb_people=spec.nb_people,
                nb_disabled=spec.nb_disabled,
                priority=spec.priority,
                address=spec.address,
                location=location,
            )
        )
    return points


@dataclass
class RecommendationResult:
    plan: AllocationPlan
    instance: AllocationInstance
    shelters: ShelterAssignment
    document: dict = field(default_factory=dict)


def solve_instance(instance: AllocationInstance, options: SolveOptions) -> AllocationPlan:
    if options.solver == "greedy":
        return solve_greedy(instance)
    if options.solver == "exact":
        return solve_exact(instance, cap=options.exact_cap)
    try:
        return solve_exact(instance, cap=options.exact_cap)
    except InstanceTooLarge as exc:
        plan = solve_greedy(instance)
        plan.notices.append(f"exact solver skipped: {exc}; greedy fallback used")
        return plan


def recommend(
    resources: list[MovingResource],
    shelters: list[Shelter],
    graph: RoadGraph,
    gazetteer: Gazetteer | None,
    specs: list[PointSpec],
    options: SolveOptions | None = None,
) -> RecommendationResult:
    options = options or SolveOptions()
    options.validate()
    points = specs_to_points(specs, gazetteer)
    available = [r for r in resources if r.available]
    if points and not available:
        raise PipelineError("no_available_resources", "no moving resource is currently available")
    try:
        matrix = build_travel_time_matrix(
            graph, available, points, fallback=options.fallback, gazetteer=gazetteer
        )
    except LocationResolutionError as exc:
        raise PipelineError(exc.code, str(exc), {"entity_id": exc.entity_id}) from exc
    instance = build_instance(available, points, matrix)
    plan = solve_instance(instance, options)
    shelter_assignment = assign_shelters(
        plan, instance, shelters, graph, fallback=options.fallback, gazetteer=gazetteer
    )
    document = plan_document(plan, instance, shelter_assignment, shelters)
    return RecommendationResult(plan=plan, instance=instance, shelters=shelter_assignment, document=document)


# Plan document ----------------------------------------------------------------


def plan_document(
    plan: AllocationPlan,
    instance: AllocationInstance,
    shelter_assignment: ShelterAssignment | None = None,
    shelters: list[Shelter] | None = None,
) -> dict:
    """The serialized allocation contract consumed by the API and the console."""
    resources = {r.id: r for r in instance.resources}
    times = {
        (a.point_id, a.resource_id): a.time_s for a in plan.assignments
    }
    by_point = shelter_assignment.by_point if shelter_assignment else {}

    per_point = []
    for outcome in plan.per_point:
        rows = sorted(
            (
                {
                    "resource_id": rid,
                    "driver_id": resources[rid].driver_id,
                    "vehicle_id": resources[rid].vehicle_id,
                    "vehicle_class": resources[rid].vehicle_class,
                    "seats": resources[rid].seats,
                    "time_s": times[(outcome.point_id, rid)],
                }
                for rid in outcome.resource_ids
            ),
            key=lambda r: (r["time_s"], r["resource_id"]),
        )
        point = next(p for p in instance.points if p.id == outcome.point_id)
        per_point.append(
            {
                "point_id": outcome.point_id,
                "priority": outcome.priority,
                "address": point.address,
                "location": {"lat": point.location[0], "lon": point.location[1]}
                if point.location
                else None,
                "nb_people": point.nb_people,
                "nb_disabled": point.nb_disabled,
                "demand_seats": outcome.demand,
                "served": outcome.served,
                "seats_delivered": outcome.seats_delivered,
                "deficit_seats": outcome.deficit,
                "resources": rows,
                "shelters": [
                    {"shelter_id": leg.shelter_id, "persons": leg.persons, "time_s": leg.time_s}
                    for leg in by_point.get(outcome.point_id, [])
                ],
            }
        )

    occupancy = []
    if shelter_assignment and shelters:
        caps = {s.id: s.capacity for s in shelters}
        occupancy = [
            {"shelter_id": sid, "capacity": caps.get(sid), "occupied": occ}
            for sid, occ in sorted(shelter_assignment.occupancy.items())
        ]

    return {
        "status": plan.status,
        "objective_s": plan.objective_s,
        "vehicles_used": plan.vehicles_used,
        "assignments": [
            {"point_id": a.point_id, "resource_id": a.resource_id, "time_s": a.time_s}
            for a in plan.assignments
        ],
        "per_point": per_point,
        "shelter_occupancy": occupancy,
        "notices": list(plan.notices),
        "diagnostics": list(shelter_assignment.diagnostics) if shelter_assignment else [],
    }


def canonical_json(doc: dict) -> str:
    """Deterministic serialization: byte-identical for identical documents."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
