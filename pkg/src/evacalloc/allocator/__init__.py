"""Constraint solver: seat-covering vehicle assignment minimizing travel time."""

from .exact import DEFAULT_EXACT_CAP, count_effective_vehicles, solve_exact
from .greedy import solve_greedy
from .model import (
    STATUS_HEURISTIC,
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    AllocationInstance,
    AllocationPlan,
    Assignment,
    InstancePoint,
    InstanceResource,
    InstanceTooLarge,
    PointOutcome,
    build_instance,
    check_plan_invariants,
    seat_demand,
)
from .oracle import brute_force_oracle
from .shelters import ShelterAssignment, ShelterLeg, assign_shelters

__all__ = [
    "AllocationInstance",
    "AllocationPlan",
    "Assignment",
    "DEFAULT_EXACT_CAP",
    "InstancePoint",
    "InstanceResource",
    "InstanceTooLarge",
    "PointOutcome",
    "STATUS_HEURISTIC",
    "STATUS_INFEASIBLE",
    "STATUS_OPTIMAL",
    "ShelterAssignment",
    "ShelterLeg",
    "assign_shelters",
    "brute_force_oracle",
    "build_instance",
    "check_plan_invariants",
    "count_effective_vehicles",
    "seat_demand",
    "solve_exact",
    "solve_greedy",
]
