"""Exact solver: depth-first branch and bound over vehicle assignments.

Vehicles are considered in descending seat order; each branches over the
reachable rescue points and "stay unassigned".  The lower bound at a node is
the cost so far plus, per uncovered point, the cheapest fractional completion
of its remaining seat demand using still-undecided vehicles ranked by
time-per-seat.  The relaxation lets points share vehicles, so the bound is
admissible and the incumbent chain (time, vehicle count, lexicographic key)
is provably optimal at the end of the search.

Symmetry and dominance rules keep duplicate fleets tractable without losing
the tie-break guarantees:

* a vehicle strictly dominated by an equal-seat sibling (worse time at every
  reachable point) may only be assigned once that sibling is assigned;
* identical vehicles (equal seats, identical time rows) are used in id order
  and matched to points in ascending point-id order.

Both rules only discard plans that are provably not the lexicographically
smallest optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    TIME_EPS,
    AllocationInstance,
    AllocationPlan,
    InstanceTooLarge,
    assignment_key,
    better_plan,
    finish_plan,
    plan_cost,
)

DEFAULT_EXACT_CAP = 25

_UNDECIDED = -1
_UNASSIGNED = -2


def count_effective_vehicles(instance: AllocationInstance) -> int:
    """Vehicles surviving dominance collapse, the size the cap applies to.

    A vehicle is collapsed when an equal-seat sibling is at least as fast to
    every point (identical rows collapse onto the smallest id).
    """
    y = instance.y
    rows = [tuple(instance.times[u][v] for u in range(instance.x)) for v in range(y)]
    redundant = 0
    for v in range(y):
        for w in range(y):
            if w == v or instance.resources[w].seats != instance.resources[v].seats:
                continue
            if all(rows[w][u] <= rows[v][u] for u in range(instance.x)):
                if rows[w] != rows[v] or instance.resources[w].id < instance.resources[v].id:
                    redundant += 1
                    break
    return y - redundant


@dataclass
class _Search:
    instance: AllocationInstance
    target: list[int]                       # point rows that must be fully covered
    order: list[int]                        # vehicle indices, seats desc then id
    strict_dominators: list[list[int]]      # v -> equal-seat strictly faster siblings
    dominated_by: list[list[int]]           # w -> vehicles w strictly dominates
    identical_prev: list[int | None]        # v -> previous member of its identical group
    candidates: list[list[tuple[float, int]]]  # point -> [(time/seats, v)] ratio asc
    find_first: bool = False                # feasibility probe mode
    best: tuple[float, int, tuple] | None = None
    best_assigned: dict[int, list[int]] | None = None
    state: list[int] = field(default_factory=list)
    demand_left: list[int] = field(default_factory=list)
    undecided_cap: list[int] = field(default_factory=list)  # per point, reachable undecided seats
    cost: float = 0.0
    used: int = 0
    found: bool = False

    def run(self) -> None:
        inst = self.instance
        self.state = [_UNDECIDED] * inst.y
        self.demand_left = [inst.points[u].demand for u in range(inst.x)]
        for u in range(inst.x):
            if u not in self.target:
                self.demand_left[u] = 0
        self.undecided_cap = [
            sum(inst.resources[v].seats for v in range(inst.y) if inst.reachable(u, v))
            for u in range(inst.x)
        ]
        self._dfs(0)

    # Bound ------------------------------------------------------------------

    def _bound(self, depth: int) -> float:
        inst = self.instance
        total_left = 0
        bound = self.cost
        for u in self.target:
            d = self.demand_left[u]
            if d <= 0:
                continue
            if d > self.undecided_cap[u]:
                return math.inf
            total_left += d
            for ratio, v in self.candidates[u]:
                if self.state[v] != _UNDECIDED:
                    continue
                seats = inst.resources[v].seats
                if seats >= d:
                    bound += ratio * d
                    d = 0
                    break
                bound += ratio * seats
                d -= seats
            if d > 0:
                return math.inf
        if total_left:
            usable = 0
            for k in range(depth, len(self.order)):
                v = self.order[k]
                if any(inst.reachable(u, v) and self.demand_left[u] > 0 for u in self.target):
                    usable += inst.resources[v].seats
            if total_left > usable:
                return math.inf
        return bound

    # Search -----------------------------------------------------------------

    def _dfs(self, depth: int) -> None:
        if self.found and self.find_first:
            return
        inst = self.instance
        if depth == len(self.order):
            if any(self.demand_left[u] > 0 for u in self.target):
                return
            pairs = [
                (inst.points[self.state[v]].id, inst.resources[v].id, inst.times[self.state[v]][v])
                for v in range(inst.y)
                if self.state[v] >= 0
            ]
            cand = (plan_cost(pairs), self.used, assignment_key(pairs))
            if better_plan(cand, self.best):
                self.best = cand
                assigned: dict[int, list[int]] = {}
                for v in range(inst.y):
                    if self.state[v] >= 0:
                        assigned.setdefault(self.state[v], []).append(v)
                self.best_assigned = assigned
            self.found = True
            return

        bound = self._bound(depth)
        if math.isinf(bound):
            return
        if self.best is not None and bound > self.best[0] + TIME_EPS:
            return

        v = self.order[depth]
        seats = inst.resources[v].seats
        for u in range(inst.x):
            if inst.reachable(u, v):
                self.undecided_cap[u] -= seats

        for u in self._assign_branches(v):
            self.state[v] = u
            self.demand_left[u] -= seats
            self.cost += inst.times[u][v]
            self.used += 1
            self._dfs(depth + 1)
            self.used -= 1
            self.cost -= inst.times[u][v]
            self.demand_left[u] += seats
            self.state[v] = _UNDECIDED
            if self.found and self.find_first:
                break

        if not (self.found and self.find_first) and self._may_stay_unassigned(v):
            self.state[v] = _UNASSIGNED
            self._dfs(depth + 1)
            self.state[v] = _UNDECIDED

        for u in range(inst.x):
            if inst.reachable(u, v):
                self.undecided_cap[u] += seats

    def _assign_branches(self, v: int):
        inst = self.instance
        if inst.resources[v].seats == 0:
            return []  # zero-seat vehicles never improve a plan
        for w in self.strict_dominators[v]:
            if self.state[w] == _UNASSIGNED:
                return []
        prev = self.identical_prev[v]
        min_point_id = None
        if prev is not None:
            if self.state[prev] < 0:
                return []  # identical siblings are used in id order
            min_point_id = inst.points[self.state[prev]].id
        branches = [
            u
            for u in self.target
            if self.demand_left[u] > 0
            and inst.reachable(u, v)
            and (min_point_id is None or inst.points[u].id >= min_point_id)
        ]
        branches.sort(key=lambda u: (inst.times[u][v], u))
        return branches

    def _may_stay_unassigned(self, v: int) -> bool:
        # Leaving v idle while a vehicle it strictly dominates is assigned
        # can always be improved by swapping, so that subtree is dead.
        return all(self.state[w] < 0 for w in self.dominated_by[v])


def _prepare(instance: AllocationInstance) -> tuple[list[int], list[list[int]], list[list[int]], list[int | None], list[list[tuple[float, int]]]]:
    inst = instance
    order = sorted(range(inst.y), key=lambda v: (-inst.resources[v].seats, inst.resources[v].id))
    rows = [tuple(inst.times[u][v] for u in range(inst.x)) for v in range(inst.y)]

    strict_dominators: list[list[int]] = [[] for _ in range(inst.y)]
    dominated_by: list[list[int]] = [[] for _ in range(inst.y)]
    identical_prev: list[int | None] = [None] * inst.y
    for v in range(inst.y):
        group_prev = None
        for w in range(inst.y):
            if w == v or inst.resources[w].seats != inst.resources[v].seats:
                continue
            if rows[w] == rows[v]:
                if inst.resources[w].id < inst.resources[v].id and (
                    group_prev is None or inst.resources[w].id > inst.resources[group_prev].id
                ):
                    group_prev = w
            elif all(
                not math.isfinite(rows[v][u]) or rows[w][u] < rows[v][u] for u in range(inst.x)
            ) and all(math.isfinite(rows[w][u]) or not math.isfinite(rows[v][u]) for u in range(inst.x)):
                strict_dominators[v].append(w)
                dominated_by[w].append(v)
        identical_prev[v] = group_prev

    candidates: list[list[tuple[float, int]]] = []
    for u in range(inst.x):
        cand = [
            (inst.times[u][v] / inst.resources[v].seats, v)
            for v in range(inst.y)
            if inst.reachable(u, v) and inst.resources[v].seats > 0
        ]
        cand.sort()
        candidates.append(cand)
    return order, strict_dominators, dominated_by, identical_prev, candidates


def _coverable(instance: AllocationInstance, target: list[int], prepared) -> bool:
    """Is there any assignment fully covering the target points?"""
    order, strict_dominators, dominated_by, identical_prev, candidates = prepared
    # Cheap certificate first: fill each point with the largest reachable seats.
    taken: set[int] = set()
    ok = True
    for u in target:
        d = instance.points[u].demand
        for v in sorted(
            (v for v in range(instance.y) if v not in taken and instance.reachable(u, v)),
            key=lambda v: -instance.resources[v].seats,
        ):
            if d <= 0:
                break
            taken.add(v)
            d -= instance.resources[v].seats
        if d > 0:
            ok = False
            break
    if ok:
        return True
    search = _Search(
        instance=instance,
        target=list(target),
        order=order,
        strict_dominators=strict_dominators,
        dominated_by=dominated_by,
        identical_prev=identical_prev,
        candidates=candidates,
        find_first=True,
    )
    search.run()
    return search.found


def choose_served_rows(instance: AllocationInstance, coverable) -> list[int]:
    """Priority-order served set: each point joins only if the set stays coverable."""
    included: list[int] = []
    for u in range(instance.x):
        if coverable(included + [u]):
            included.append(u)
    return included


def solve_exact(instance: AllocationInstance, cap: int = DEFAULT_EXACT_CAP) -> AllocationPlan:
    """Time-optimal plan (then fewest vehicles, then lexicographic order).

    Raises :class:`InstanceTooLarge` when more than ``cap`` vehicles survive
    dominance collapse; greedy is the intended fallback then.  When not every
    point can be covered the result is a partial plan: points are admitted in
    priority order, each served fully or not at all, and unserved points carry
    a seat-deficit diagnostic.
    """
    effective = count_effective_vehicles(instance)
    if effective > cap:
        raise InstanceTooLarge(effective, cap, "solve_exact")

    if instance.x == 0:
        return finish_plan(instance, STATUS_OPTIMAL, {}, instance.notices)

    prepared = _prepare(instance)
    all_rows = list(range(instance.x))

    def run_optimize(target: list[int], warm: AllocationPlan | None = None):
        search = _Search(
            instance=instance,
            target=target,
            order=prepared[0],
            strict_dominators=prepared[1],
            dominated_by=prepared[2],
            identical_prev=prepared[3],
            candidates=prepared[4],
        )
        if warm is not None and all(out.served for out in warm.per_point):
            pairs = [(a.point_id, a.resource_id, a.time_s) for a in warm.assignments]
            search.best = (plan_cost(pairs), warm.vehicles_used, assignment_key(pairs))
            row_of = {p.id: u for u, p in enumerate(instance.points)}
            col_of = {r.id: v for v, r in enumerate(instance.resources)}
            warm_assigned: dict[int, list[int]] = {}
            for a in warm.assignments:
                warm_assigned.setdefault(row_of[a.point_id], []).append(col_of[a.resource_id])
            search.best_assigned = warm_assigned
        search.run()
        return search

    from .greedy import solve_greedy  # local import, greedy warm-starts the search

    warm = solve_greedy(instance)
    search = run_optimize(all_rows, warm)
    if search.best_assigned is not None:
        return finish_plan(instance, STATUS_OPTIMAL, search.best_assigned, instance.notices)

    included = choose_served_rows(instance, lambda rows: _coverable(instance, rows, prepared))
    if not included:
        return finish_plan(instance, STATUS_INFEASIBLE, {}, instance.notices)
    search = run_optimize(included)
    assigned = search.best_assigned if search.best_assigned is not None else {}
    return finish_plan(instance, STATUS_INFEASIBLE, assigned, instance.notices)
