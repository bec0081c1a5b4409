"""Exhaustive enumeration oracle for small instances, used by tests.

Every vehicle independently chooses a rescue point or stays idle, giving
``(x+1)**y`` assignments which are scored in bulk with numpy.  The objective
and the full tie-break chain are shared with the production solvers via
:mod:`evacalloc.allocator.model`, so agreement checks are exact.
"""

from __future__ import annotations

import numpy as np

from .exact import choose_served_rows
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

ORACLE_MAX_ASSIGNMENTS = 5_000_000


def _enumerate(instance: AllocationInstance):
    """All assignments as an (N, y) array with 0 = idle, u+1 = point row u."""
    x, y = instance.x, instance.y
    n = (x + 1) ** y
    codes = np.arange(n, dtype=np.int64)
    a = np.empty((n, y), dtype=np.int8)
    for v in range(y):
        a[:, v] = (codes // ((x + 1) ** v)) % (x + 1)
    return a


def brute_force_oracle(instance: AllocationInstance) -> AllocationPlan:
    """Reference plan by full enumeration; same tie-break chain as solve_exact."""
    x, y = instance.x, instance.y
    if (x + 1) ** y > ORACLE_MAX_ASSIGNMENTS:
        raise InstanceTooLarge((x + 1) ** y, ORACLE_MAX_ASSIGNMENTS, "brute_force_oracle")
    if x == 0:
        return finish_plan(instance, STATUS_OPTIMAL, {}, instance.notices)

    a = _enumerate(instance)
    seats = np.array([r.seats for r in instance.resources], dtype=np.float64)
    demands = np.array([p.demand for p in instance.points], dtype=np.float64)
    # Row 0 is the idle choice; unreachable pairs poison the cost with inf.
    tpad = np.zeros((x + 1, y), dtype=np.float64)
    for u in range(x):
        for v in range(y):
            tpad[u + 1, v] = instance.times[u][v]
    cols = np.arange(y)
    cost = tpad[a, cols].sum(axis=1)

    def coverage_ok(rows: list[int]) -> np.ndarray:
        ok = np.ones(len(a), dtype=bool)
        for u in rows:
            delivered = ((a == u + 1) @ seats)
            ok &= delivered >= demands[u]
        return ok

    all_rows = list(range(x))
    feasible = coverage_ok(all_rows) & np.isfinite(cost)
    if feasible.any():
        return _pick_best(instance, a, cost, feasible, STATUS_OPTIMAL)

    def coverable(rows: list[int]) -> bool:
        allowed = np.isin(a, [0] + [u + 1 for u in rows]).all(axis=1)
        mask = allowed & coverage_ok(rows) & np.isfinite(cost)
        return bool(mask.any())

    included = choose_served_rows(instance, coverable)
    if not included:
        return finish_plan(instance, STATUS_INFEASIBLE, {}, instance.notices)
    allowed = np.isin(a, [0] + [u + 1 for u in included]).all(axis=1)
    mask = allowed & coverage_ok(included) & np.isfinite(cost)
    return _pick_best(instance, a, cost, mask, STATUS_INFEASIBLE)


def _pick_best(instance, a, cost, mask, status) -> AllocationPlan:
    idx = np.nonzero(mask)[0]
    costs = cost[idx]
    near = idx[costs <= costs.min() + TIME_EPS]
    best = None
    best_row = None
    for i in near:
        row = a[i]
        pairs = [
            (instance.points[row[v] - 1].id, instance.resources[v].id, instance.times[row[v] - 1][v])
            for v in range(instance.y)
            if row[v] > 0
        ]
        cand = (plan_cost(pairs), len(pairs), assignment_key(pairs))
        if better_plan(cand, best):
            best = cand
            best_row = row
    assigned: dict[int, list[int]] = {}
    for v in range(instance.y):
        if best_row[v] > 0:
            assigned.setdefault(int(best_row[v]) - 1, []).append(v)
    return finish_plan(instance, status, assigned, instance.notices)
