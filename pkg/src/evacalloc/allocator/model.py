"""Allocation problem model: instance, plan, and the shared tie-break chain.

A plan's distribution matrix assigns each vehicle to at most one rescue
point (column sums <= 1) and must deliver, per served point, at least
``nb_people + 2 * nb_disabled`` seats: non-ambulatory evacuees are budgeted
two seats each.  Plans are compared by (total travel time, vehicles used,
lexicographic assignment key); every solver in this package, including the
test oracle, goes through the helpers here so the chain stays identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..kb.entities import MovingResource, RescuePoint
from ..routing.times import TravelTimeMatrix

# Seat-equivalents per person who cannot move unaided.
DISABLED_SEAT_FACTOR = 2

# Two float travel-time sums within this many seconds count as a tie.
TIME_EPS = 1e-9

STATUS_OPTIMAL = "optimal"
STATUS_HEURISTIC = "heuristic"
STATUS_INFEASIBLE = "infeasible"


class InstanceTooLarge(ValueError):
    def __init__(self, size: int, cap: int, solver: str):
        super().__init__(f"{solver}: instance with {size} effective vehicles exceeds cap {cap}")
        self.size = size
        self.cap = cap


def seat_demand(nb_people: int, nb_disabled: int) -> int:
    return nb_people + DISABLED_SEAT_FACTOR * nb_disabled


@dataclass(frozen=True)
class InstancePoint:
    id: str
    demand: int
    priority: int
    nb_people: int
    nb_disabled: int
    address: str | None = None
    location: tuple[float, float] | None = None


@dataclass(frozen=True)
class InstanceResource:
    id: str
    seats: int
    driver_id: str | None = None
    vehicle_id: str | None = None
    vehicle_class: str | None = None
    lying_places: int = 0


@dataclass
class AllocationInstance:
    """Solver input: demands, capacities and the travel-time matrix.

    Points are ordered by (priority, id), resources by id; ``times[u][v]``
    follows that ordering.  Unreachable entries are ``math.inf`` and never enter
    a plan.
    """

    points: list[InstancePoint]
    resources: list[InstanceResource]
    times: list[list[float]]
    notices: list[str] = field(default_factory=list)

    @property
    def x(self) -> int:
        return len(self.points)

    @property
    def y(self) -> int:
        return len(self.resources)

    def reachable(self, u: int, v: int) -> bool:
        return math.isfinite(self.times[u][v])


def build_instance(
    resources: list[MovingResource],
    points: list[RescuePoint],
    matrix: TravelTimeMatrix,
) -> AllocationInstance:
    """Assemble a solver instance from materialized entities and the matrix.

    Only available resources are considered; resources unreachable to every
    point are dropped with a notice.  Demands apply the 2-seats rule for
    non-ambulatory people.
    """
    notices = list(matrix.notices)
    available = [r for r in resources if r.available]
    dropped = len(resources) - len(available)
    if dropped:
        notices.append(f"{dropped} unavailable resource(s) excluded")

    inst_points = sorted(
        (
            InstancePoint(
                id=p.id,
                demand=seat_demand(p.nb_people, p.nb_disabled),
                priority=p.priority,
                nb_people=p.nb_people,
                nb_disabled=p.nb_disabled,
                address=p.address,
                location=p.location,
            )
            for p in points
        ),
        key=lambda p: (p.priority, p.id),
    )
    if not inst_points:
        notices.append("empty_points: nothing to allocate")

    row_of = {pid: i for i, pid in enumerate(matrix.point_ids)}
    col_of = {rid: j for j, rid in enumerate(matrix.resource_ids)}

    inst_resources: list[InstanceResource] = []
    columns: list[list[float]] = []
    for r in sorted(available, key=lambda r: r.id):
        col = [matrix.times[row_of[p.id]][col_of[r.id]] for p in inst_points]
        if inst_points and all(math.isinf(t) for t in col):
            notices.append(f"resource {r.id} unreachable to every rescue point, excluded")
            continue
        inst_resources.append(
            InstanceResource(
                id=r.id,
                seats=r.seats,
                driver_id=r.driver_id,
                vehicle_id=r.vehicle_id,
                vehicle_class=r.vehicle_class.value,
                lying_places=r.lying_places,
            )
        )
        columns.append(col)

    times = [[columns[v][u] for v in range(len(columns))] for u in range(len(inst_points))]
    return AllocationInstance(points=inst_points, resources=inst_resources, times=times, notices=notices)


# Plans -----------------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    point_id: str
    resource_id: str
    time_s: float


@dataclass(frozen=True)
class PointOutcome:
    point_id: str
    priority: int
    demand: int
    served: bool
    seats_delivered: int
    deficit: int
    resource_ids: tuple[str, ...]


@dataclass
class AllocationPlan:
    status: str
    assignments: list[Assignment]
    objective_s: float
    vehicles_used: int
    per_point: list[PointOutcome]
    notices: list[str] = field(default_factory=list)

    def matrix(self, instance: AllocationInstance) -> list[list[int]]:
        """The plan as a dense 0/1 distribution matrix over the instance."""
        assigned = {(a.point_id, a.resource_id) for a in self.assignments}
        return [
            [1 if (p.id, r.id) in assigned else 0 for r in instance.resources]
            for p in instance.points
        ]


def plan_cost(pairs: list[tuple[str, str, float]]) -> float:
    """Canonical objective: times summed in sorted (point, resource) order.

    Every solver computes the reported objective this way so that identical
    assignments give bit-identical totals regardless of search order.
    """
    return math.fsum(t for _, _, t in sorted(pairs, key=lambda p: (p[0], p[1])))


def assignment_key(pairs) -> tuple[tuple[str, str], ...]:
    """Lexicographic tie-break key: sorted (point id, resource id) pairs."""
    return tuple(sorted((p, r) for p, r, *_ in pairs))


def better_plan(
    cand: tuple[float, int, tuple],
    best: tuple[float, int, tuple] | None,
) -> bool:
    """Tie-break chain: total time, then vehicle count, then lexicographic key."""
    if best is None:
        return True
    cost_c, veh_c, key_c = cand
    cost_b, veh_b, key_b = best
    if cost_c < cost_b - TIME_EPS:
        return True
    if cost_c > cost_b + TIME_EPS:
        return False
    if veh_c != veh_b:
        return veh_c < veh_b
    return key_c < key_b


def finish_plan(
    instance: AllocationInstance,
    status: str,
    assigned: dict[int, list[int]],
    notices: list[str] | None = None,
) -> AllocationPlan:
    """Build a plan from per-point resource index lists, computing outcomes.

    Unserved points get a deficit diagnostic: the seat-equivalents still
    uncovered after throwing every unused reachable vehicle at the point.
    """
    pairs = []
    used: set[int] = set()
    for u, vs in assigned.items():
        for v in vs:
            pairs.append((instance.points[u].id, instance.resources[v].id, instance.times[u][v]))
            used.add(v)

    per_point = []
    for u, p in enumerate(instance.points):
        vs = sorted(assigned.get(u, ()))
        delivered = sum(instance.resources[v].seats for v in vs)
        served = bool(vs) and delivered >= p.demand
        if p.demand == 0:
            served = True
        deficit = 0
        if not served:
            spare = sum(
                instance.resources[v].seats
                for v in range(instance.y)
                if v not in used and instance.reachable(u, v)
            )
            deficit = max(0, p.demand - spare)
        per_point.append(
            PointOutcome(
                point_id=p.id,
                priority=p.priority,
                demand=p.demand,
                served=served,
                seats_delivered=delivered,
                deficit=deficit,
                resource_ids=tuple(instance.resources[v].id for v in vs),
            )
        )

    assignments = [
        Assignment(point_id=p, resource_id=r, time_s=t)
        for p, r, t in sorted(pairs, key=lambda p: (p[0], p[1]))
    ]
    return AllocationPlan(
        status=status,
        assignments=assignments,
        objective_s=plan_cost(pairs),
        vehicles_used=len(used),
        per_point=per_point,
        notices=list(notices or ()),
    )


def check_plan_invariants(instance: AllocationInstance, plan: AllocationPlan) -> list[str]:
    """Constraint self-check used by tests and the scenario runner.

    Returns human-readable violations of the one-point-per-vehicle rule, the
    seat-coverage rule on served points, and objective bookkeeping.
    """
    problems = []
    by_resource: dict[str, int] = {}
    for a in plan.assignments:
        by_resource[a.resource_id] = by_resource.get(a.resource_id, 0) + 1
    for rid, n in sorted(by_resource.items()):
        if n > 1:
            problems.append(f"resource {rid} assigned to {n} points (column sum > 1)")
    seats = {r.id: r.seats for r in instance.resources}
    delivered: dict[str, int] = {}
    for a in plan.assignments:
        delivered[a.point_id] = delivered.get(a.point_id, 0) + seats[a.resource_id]
    for out in plan.per_point:
        if out.served and delivered.get(out.point_id, 0) < out.demand:
            problems.append(
                f"point {out.point_id} marked served with {delivered.get(out.point_id, 0)}"
                f" seats < demand {out.demand}"
            )
    recomputed = plan_cost([(a.point_id, a.resource_id, a.time_s) for a in plan.assignments])
    if abs(recomputed - plan.objective_s) > TIME_EPS:
        problems.append(f"objective {plan.objective_s} != recomputed {recomputed}")
    return problems
