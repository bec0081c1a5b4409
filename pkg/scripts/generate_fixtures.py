#!/usr/bin/env python3
"""Generate the bundled scenario fixtures.

The compiegne-flood bundle reproduces the reference flood scenario: the
fleet composition (52 vehicles: 6 minibuses / 95 seats, 5 minivans / 18,
5 vans / 45, 1 campervan / 4, 20 SUVs / 80, 15 berlines / 60), the three
gymnasium shelters (320 / 120 / 240 places) and the two rescue points
(100 people priority 1, 72 people priority 2) are fixed inputs; the street
grid, coordinates and driver roster are synthetic.

Run from the repository root after an editable install:

    python3 scripts/generate_fixtures.py
"""

from __future__ import annotations

import json
import random
import sys
import time
from pathlib import Path

from evacalloc.allocator import brute_force_oracle, count_effective_vehicles
from evacalloc.kb.entities import MovingResource, Shelter, save_entities_file
from evacalloc.kb.schema import VehicleClass
from evacalloc.pipeline import canonical_json
from evacalloc.routing.geo import Gazetteer
from evacalloc.routing.graph import RoadGraph, save_road_graph
from evacalloc.scenario import load_scenario, run_scenario

ROOT = Path(__file__).resolve().parent.parent
CENTER_LAT, CENTER_LON = 49.4179, 2.8261
LAT_STEP, LON_STEP = 0.0014, 0.0022

FIRST = [
    "Josept", "Julien", "Henri", "Claire", "Margaux", "Antoine", "Camille", "Hugo",
    "Lea", "Nina", "Paul", "Romain", "Sarah", "Theo", "Zoe", "Adele", "Bruno",
    "Chloe", "Damien", "Elise", "Fabien", "Gaelle", "Ines", "Jules", "Karim",
    "Lucie", "Marc", "Noemie", "Oscar", "Perrine", "Quentin", "Remy", "Sylvie",
    "Tristan", "Ugo", "Valerie", "Willy", "Xavier", "Yann", "Amelie", "Basile",
    "Celine", "Denis", "Emma", "Felix", "Gilles", "Helene", "Ivan", "Jade",
    "Kevin", "Laure", "Mathis",
]
LAST = [
    "Brault", "Laisne", "Le", "Moreau", "Petit", "Roux", "Fournier", "Girard",
    "Lambert", "Bonnet", "Dupont", "Martin", "Durand", "Leroy", "Simon", "Laurent",
    "Michel", "Garcia", "David", "Bertrand", "Robert", "Richard", "Thomas", "Dubois",
    "Vincent", "Muller", "Lefevre", "Faure", "Andre", "Mercier", "Blanc", "Guerin",
    "Boyer", "Garnier", "Chevalier", "Francois", "Legrand", "Gauthier", "Perrin",
    "Robin", "Clement", "Morin", "Nicolas", "Henry", "Rousseau", "Mathieu",
    "Gautier", "Masson", "Marchand", "Duval", "Denis", "Dumont",
]

# (vehicle class, model stem, per-vehicle seats, per-vehicle lying places)
FLEET = (
    [(VehicleClass.MINIBUS, "Peugeot_Boxer", 15, 0)]
    + [(VehicleClass.MINIBUS, "Renault_Master", 16, 0)] * 5
    + [(VehicleClass.MINIVAN, "Toyota_Sienna", 4, 4)] * 3
    + [(VehicleClass.MINIVAN, "Citroen_Spacetourer", 3, 3)] * 2
    + [(VehicleClass.VAN, "Citroen_Jumper", 9, 0)] * 5
    + [(VehicleClass.CAMPERVAN, "Fiat_Ducato_Camper", 4, 6)]
    + [(VehicleClass.SUV, "BMW_X5", 4, 0)] * 10
    + [(VehicleClass.SUV, "Peugeot_3008", 4, 0)] * 10
    + [(VehicleClass.BERLINE, "Peugeot_508", 4, 0)] * 8
    + [(VehicleClass.BERLINE, "Renault_Talisman", 4, 0)] * 7
)

POINT_1_ADDRESS = "17 Winston Churchill Street, Compiègne"
POINT_2_ADDRESS = "8 Solferino Bridge Street, Compiègne"
SHELTERS = [
    ("Shelter_01", "Rose Gymnasium", "Rose Gymnasium, Compiègne", 320),
    ("Shelter_02", "Gaëtan Denain Gymnasium", "Gaëtan Denain Gymnasium, Compiègne", 120),
    ("Shelter_03", "Tainturier Gymnasium", "Tainturier Gymnasium, Compiègne", 240),
]


def grid_graph(rows: int, cols: int, rng: random.Random, extras: int = 0) -> tuple[RoadGraph, dict]:
    graph = RoadGraph(directed=False)
    coords = {}

    def node_id(r, c):
        return str(r * cols + c + 1)

    for r in range(rows):
        for c in range(cols):
            lat = CENTER_LAT + (r - rows / 2) * LAT_STEP
            lon = CENTER_LON + (c - cols / 2) * LON_STEP
            graph.add_node(node_id(r, c), lat, lon)
            coords[node_id(r, c)] = (lat, lon)
    from evacalloc.routing.geo import haversine_distance

    for r in range(rows):
        for c in range(cols):
            here = node_id(r, c)
            for dr, dc in ((0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if rr < rows and cc < cols:
                    there = node_id(rr, cc)
                    length = haversine_distance(coords[here], coords[there])
                    speed = rng.choice([30.0, 30.0, 40.0, 50.0])
                    graph.add_edge(here, there, round(length, 1), speed)
    # Outskirt nodes hanging off the grid by a single country road.
    next_id = rows * cols + 1
    for k in range(extras):
        lat = CENTER_LAT + (rows / 2 + 1 + k) * LAT_STEP
        lon = CENTER_LON + (k - extras / 2) * LON_STEP * 3
        nid = str(next_id + k)
        graph.add_node(nid, lat, lon)
        coords[nid] = (lat, lon)
        anchor = node_id(rows - 1, min(cols - 1, 3 * k + 1))
        length = haversine_distance(coords[nid], coords[anchor])
        graph.add_edge(nid, anchor, round(length, 1), 50.0)
    return graph, coords


def build_flood_bundle(out_dir: Path) -> None:
    rng = random.Random(20230614)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, coords = grid_graph(14, 14, rng, extras=4)
    grid_nodes = [str(i) for i in range(1, 14 * 14 + 1)]

    names = list(zip(FIRST, LAST))
    assert len(names) >= len(FLEET)
    resources = []
    model_counts: dict[str, int] = {}
    for i, (vclass, model, seats, lying) in enumerate(FLEET):
        first, last = names[i]
        driver = f"{first}_{last}"
        model_counts[model] = model_counts.get(model, 0) + 1
        vehicle = f"{model}_{model_counts[model]:02d}"
        node = rng.choice(grid_nodes)
        resources.append(
            MovingResource(
                id=f"{driver}/{vehicle}",
                driver_id=driver,
                vehicle_id=vehicle,
                vehicle_class=vclass,
                seats=seats,
                lying_places=lying,
                location=coords[node],
                available=True,
            )
        )

    point_nodes = {"p1": "47", "p2": "150"}   # rows 3 and 10 of the grid
    shelter_nodes = ["24", "104", "187"]
    gazetteer = Gazetteer()
    gazetteer.add(POINT_1_ADDRESS, coords[point_nodes["p1"]])
    gazetteer.add(POINT_2_ADDRESS, coords[point_nodes["p2"]])
    shelters = []
    for (sid, name, address, capacity), node in zip(SHELTERS, shelter_nodes):
        gazetteer.add(address, coords[node])
        shelters.append(
            Shelter(id=sid, name=name, address=address, location=coords[node], capacity=capacity)
        )

    save_entities_file(out_dir / "entities.json", resources=resources, shelters=shelters)
    save_road_graph(graph, out_dir / "graph.txt")
    gazetteer.save(out_dir / "gazetteer.tsv")
    request = {
        "points": [
            {"address": POINT_1_ADDRESS, "nb_people": 100, "nb_disabled": 0, "priority": 1},
            {"address": POINT_2_ADDRESS, "nb_people": 72, "nb_disabled": 0, "priority": 2},
        ],
        "options": {"solver": "auto", "fallback": "straight-line"},
    }
    (out_dir / "request.json").write_text(json.dumps(request, indent=2, ensure_ascii=False) + "\n", "utf-8")
    manifest = {
        "entities": "entities.json",
        "graph": "graph.txt",
        "gazetteer": "gazetteer.tsv",
        "request": "request.json",
        "expected": "expected.json",
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", "utf-8")

    # Solve once to freeze the golden plan document and sanity-check the bundle.
    (out_dir / "expected.json").write_text("{}\n", "utf-8")
    bundle = load_scenario(out_dir)
    assert len(bundle.resources) == 52, len(bundle.resources)
    assert sum(r.seats for r in bundle.resources) == 302
    t0 = time.time()
    result = run_scenario(bundle)
    elapsed = time.time() - t0
    effective = count_effective_vehicles(result.instance)
    print(f"flood: status={result.plan.status} objective={result.plan.objective_s:.1f}s "
          f"vehicles={result.plan.vehicles_used} effective={effective} solve={elapsed:.2f}s")
    assert result.plan.status == "optimal", result.plan.status
    assert effective <= 25, f"dominance survivors {effective} exceed the exact cap"
    assert elapsed < 10.0
    for outcome in result.plan.per_point:
        assert outcome.served and outcome.seats_delivered >= outcome.demand
    (out_dir / "expected.json").write_text(canonical_json(result.document), "utf-8")


def build_mini_bundle(out_dir: Path) -> None:
    rng = random.Random(7)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, coords = grid_graph(5, 5, rng)

    picks = [
        (VehicleClass.MINIBUS, "Renault_Master", 16, 0, "1"),
        (VehicleClass.VAN, "Citroen_Jumper", 9, 0, "7"),
        (VehicleClass.SUV, "BMW_X5", 4, 0, "13"),
        (VehicleClass.SUV, "Peugeot_3008", 4, 0, "19"),
        (VehicleClass.BERLINE, "Peugeot_508", 4, 0, "25"),
        (VehicleClass.MINIVAN, "Toyota_Sienna", 4, 4, "3"),
        (VehicleClass.BERLINE, "Renault_Talisman", 4, 0, "11"),
        (VehicleClass.VAN, "Fiat_Ducato", 9, 0, "22"),
    ]
    resources = []
    for i, (vclass, model, seats, lying, node) in enumerate(picks):
        first, last = FIRST[i], LAST[-(i + 1)]
        driver = f"{first}_{last}"
        vehicle = f"{model}_{i + 1:02d}"
        resources.append(
            MovingResource(
                id=f"{driver}/{vehicle}",
                driver_id=driver,
                vehicle_id=vehicle,
                vehicle_class=vclass,
                seats=seats,
                lying_places=lying,
                location=coords[node],
            )
        )
    gazetteer = Gazetteer()
    gazetteer.add("2 Market Square, Compiègne", coords["8"])
    gazetteer.add("5 Riverside Walk, Compiègne", coords["18"])
    gazetteer.add("Rose Gymnasium, Compiègne", coords["5"])
    shelters = [
        Shelter(id="Shelter_01", name="Rose Gymnasium", address="Rose Gymnasium, Compiègne",
                location=coords["5"], capacity=60),
    ]
    save_entities_file(out_dir / "entities.json", resources=resources, shelters=shelters)
    save_road_graph(graph, out_dir / "graph.txt")
    gazetteer.save(out_dir / "gazetteer.tsv")
    request = {
        "points": [
            {"address": "2 Market Square, Compiègne", "nb_people": 12, "nb_disabled": 0, "priority": 1},
            {"address": "5 Riverside Walk, Compiègne", "nb_people": 5, "nb_disabled": 1, "priority": 2},
        ],
        "options": {"solver": "auto", "fallback": "straight-line"},
    }
    (out_dir / "request.json").write_text(json.dumps(request, indent=2, ensure_ascii=False) + "\n", "utf-8")
    manifest = {
        "entities": "entities.json",
        "graph": "graph.txt",
        "gazetteer": "gazetteer.tsv",
        "request": "request.json",
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", "utf-8")

    bundle = load_scenario(out_dir)
    result = run_scenario(bundle)
    reference = brute_force_oracle(result.instance)
    assert result.plan.status == "optimal"
    assert abs(reference.objective_s - result.plan.objective_s) <= 1e-9
    print(f"mini: status={result.plan.status} objective={result.plan.objective_s:.1f}s "
          f"vehicles={result.plan.vehicles_used} (oracle agrees)")


if __name__ == "__main__":
    build_flood_bundle(ROOT / "scenarios" / "compiegne-flood")
    build_mini_bundle(ROOT / "scenarios" / "compiegne-mini")
    print("fixtures written", file=sys.stderr)
