import math
import random
from pathlib import Path

import pytest

from evacalloc.allocator.model import AllocationInstance, InstancePoint, InstanceResource
from evacalloc.kb.store import TripleStore
from evacalloc.routing.graph import RoadGraph

REPO_ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = REPO_ROOT / "scenarios"

EXAMPLE_TRIPLES = [
    # "A Toyota Sienna of 8 seats is driven by Henri Le"
    ("Henri_Le/Toyota_Sienna", "rdf:type", "cmo:MovingResource"),
    ("Toyota_Sienna", "rdf:type", "cmo:Minivan"),
    ("Toyota_Sienna", "is_a_Part_of", "Henri_Le/Toyota_Sienna"),
    ("Henri_Le", "rdf:type", "cmo:Driver"),
    ("Henri_Le", "is_a_Part_of", "Henri_Le/Toyota_Sienna"),
    ("Toyota_Sienna", "nb_of_Seat", "8_places"),
    # a rescue point with 100 people awaiting transit
    ("RescuePoint_01", "rdf:type", "cmo:RescuePoint"),
    ("RescuePoint_01", "has_Total_People", 100),
    ("RescuePoint_01", "has_Address", "17_Winston_Churchill_Street_Compiègne"),
    # a municipal shelter with capacity 200
    ("Shelter_01", "rdf:type", "cmo:Shelter"),
    ("Shelter_01", "has_capacity", 200),
    ("Shelter_01", "has_Address", "Rose_Gymnasium_Compiègne"),
]


@pytest.fixture
def example_store() -> TripleStore:
    store = TripleStore()
    for s, p, o in EXAMPLE_TRIPLES:
        store.assert_triple(s, p, o)
    return store


@pytest.fixture
def line_graph() -> RoadGraph:
    """Three nodes in a row, 1000 m at 36 km/h per edge (100 s each)."""
    g = RoadGraph(directed=False)
    g.add_node("1", 49.0, 2.0)
    g.add_node("2", 49.009, 2.0)
    g.add_node("3", 49.018, 2.0)
    g.add_edge("1", "2", 1000, 36)
    g.add_edge("2", "3", 1000, 36)
    return g


@pytest.fixture(scope="session")
def flood_dir() -> Path:
    return SCENARIOS / "compiegne-flood"


@pytest.fixture(scope="session")
def mini_dir() -> Path:
    return SCENARIOS / "compiegne-mini"


def make_instance(points, resources, times) -> AllocationInstance:
    """points: (id, demand, priority); resources: (id, seats); times: x lists of y."""
    pts = [
        InstancePoint(id=pid, demand=d, priority=pr, nb_people=d, nb_disabled=0)
        for pid, d, pr in points
    ]
    pts_sorted = sorted(pts, key=lambda p: (p.priority, p.id))
    order = [pts.index(p) for p in pts_sorted]
    rs = [InstanceResource(id=rid, seats=seats) for rid, seats in resources]
    return AllocationInstance(
        points=pts_sorted,
        resources=rs,
        times=[list(times[i]) for i in order],
    )


def random_instance(rng: random.Random, xmax=3, ymax=10, pa=(2, 15), integral_times=False):
    """Random feasible-or-not instance with occasional unreachable pairs."""
    x = rng.randint(1, xmax)
    y = rng.randint(1, ymax)
    points = []
    for u in range(x):
        nb = rng.randint(0, 20)
        dis = rng.randint(0, 4)
        if nb + dis == 0:
            nb = 1
        points.append((f"P{u + 1:02d}", nb + 2 * dis, rng.randint(1, 3)))
    resources = [(f"R{v + 1:02d}", rng.randint(*pa)) for v in range(y)]
    times = []
    for _ in range(x):
        row = []
        for _ in range(y):
            if rng.random() < 0.08:
                row.append(math.inf)
            elif integral_times:
                row.append(float(rng.randint(1, 120)))
            else:
                row.append(round(rng.uniform(5.0, 1800.0), 3))
        times.append(row)
    # mirror build_instance: drop resources unreachable to every point
    keep = [v for v in range(y) if any(math.isfinite(times[u][v]) for u in range(x))]
    resources = [resources[v] for v in keep]
    times = [[row[v] for v in keep] for row in times]
    return make_instance(points, resources, times)
