"""Greedy heuristic: nearest-vehicle accumulation plus one swap pass.

Scales past the exact solver's cap.  Points are handled in priority order
(then id); each repeatedly takes the fastest unassigned reachable vehicle
until its seat demand is covered.  A point that cannot be covered releases
its vehicles and is reported unserved.  One improvement pass then tries to
swap each chosen vehicle for a strictly faster unassigned substitute that
keeps the point covered.
"""

from __future__ import annotations

from .model import STATUS_HEURISTIC, AllocationInstance, AllocationPlan, finish_plan


def solve_greedy(instance: AllocationInstance) -> AllocationPlan:
    inst = instance
    assigned: dict[int, list[int]] = {}
    taken: set[int] = set()

    for u in range(inst.x):  # instance points are already (priority, id) ordered
        demand = inst.points[u].demand
        if demand <= 0:
            continue
        chosen: list[int] = []
        delivered = 0
        candidates = sorted(
            (v for v in range(inst.y) if inst.reachable(u, v) and inst.resources[v].seats > 0),
            key=lambda v: (inst.times[u][v], inst.resources[v].id),
        )
        for v in candidates:
            if delivered >= demand:
                break
            if v in taken:
                continue
            chosen.append(v)
            taken.add(v)
            delivered += inst.resources[v].seats
        if delivered >= demand:
            assigned[u] = chosen
        else:
            taken.difference_update(chosen)  # full coverage or nothing

    _swap_pass(inst, assigned, taken)
    return finish_plan(inst, STATUS_HEURISTIC, assigned, inst.notices)


def _swap_pass(inst: AllocationInstance, assigned: dict[int, list[int]], taken: set[int]) -> None:
    for u in sorted(assigned):
        chosen = assigned[u]
        delivered = sum(inst.resources[v].seats for v in chosen)
        for i, v in enumerate(list(chosen)):
            floor = inst.points[u].demand - (delivered - inst.resources[v].seats)
            best = None
            for w in range(inst.y):
                if w in taken or not inst.reachable(u, w):
                    continue
                if inst.resources[w].seats < floor:
                    continue
                if inst.times[u][w] >= inst.times[u][v]:
                    continue
                key = (inst.times[u][w], inst.resources[w].id)
                if best is None or key < best[0]:
                    best = (key, w)
            if best is not None:
                w = best[1]
                taken.discard(v)
                taken.add(w)
                chosen[i] = w
                delivered = delivered - inst.resources[v].seats + inst.resources[w].seats
