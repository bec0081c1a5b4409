import json

import pytest
from fastapi.testclient import TestClient

from evacalloc.kb.entities import MovingResource, Shelter, store_from_entities
from evacalloc.kb.schema import VehicleClass
from evacalloc.routing.geo import Gazetteer
from evacalloc.routing.graph import RoadGraph
from evacalloc.service import Engine, ServiceConfig, create_app


def small_world():
    """Line of 4 nodes, 100 s per hop; two vans, one SUV, one shelter."""
    g = RoadGraph(directed=False)
    for i in range(1, 5):
        g.add_node(str(i), 49.0 + i * 0.009, 2.0)
    for i in range(1, 4):
        g.add_edge(str(i), str(i + 1), 1000, 36)
    loc = lambda i: (49.0 + i * 0.009, 2.0)
    resources = [
        MovingResource(id="Ana/Van_1", driver_id="Ana", vehicle_id="Van_1",
                       vehicle_class=VehicleClass.VAN, seats=9, location=loc(1)),
        MovingResource(id="Bob/Van_2", driver_id="Bob", vehicle_id="Van_2",
                       vehicle_class=VehicleClass.VAN, seats=9, location=loc(4)),
        MovingResource(id="Cleo/SUV_1", driver_id="Cleo", vehicle_id="SUV_1",
                       vehicle_class=VehicleClass.SUV, seats=4, location=loc(2)),
    ]
    shelters = [Shelter(id="Shelter_01", name="Rose Gymnasium", capacity=120, location=loc(4))]
    gaz = Gazetteer({"17 winston churchill street compiegne": loc(2)})
    return g, gaz, resources, shelters


@pytest.fixture
def client(tmp_path):
    g, gaz, resources, shelters = small_world()
    store = store_from_entities(resources, [], shelters)
    config = ServiceConfig(
        kb_path=str(tmp_path / "kb.tsv"), log_path=str(tmp_path / "events.jsonl")
    )
    engine = Engine(config, store=store, graph=g, gazetteer=gaz)
    app = create_app(config, engine)
    return TestClient(app)


def post_report(client, rid, available, at, lat=49.009, lon=2.0):
    return client.post(
        "/availability",
        json={
            "resource_id": rid,
            "available": available,
            "location": {"lat": lat, "lon": lon},
            "reported_at": at,
        },
    )


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_availability_roundtrip(client):
    r = post_report(client, "Ana/Van_1", True, "2024-03-01T10:00:00Z")
    assert r.status_code == 200
    resources = {x["id"]: x for x in client.get("/resources").json()}
    assert resources["Ana/Van_1"]["available"] is True

    r = post_report(client, "Ana/Van_1", False, "2024-03-01T10:05:00Z")
    assert r.status_code == 200 and r.json()["changed"] is True
    resources = {x["id"]: x for x in client.get("/resources").json()}
    assert resources["Ana/Van_1"]["available"] is False
    assert client.get("/availability/Ana/Van_1").json()["available"] is False


def test_availability_unknown_resource(client):
    r = post_report(client, "Ghost/Car", True, "2024-03-01T10:00:00Z")
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_resource"


def test_availability_stale_report_rejected(client):
    assert post_report(client, "Ana/Van_1", True, "2024-03-01T10:05:00Z").status_code == 200
    r = post_report(client, "Ana/Van_1", False, "2024-03-01T10:00:00Z")
    assert r.status_code == 409
    assert r.json()["code"] == "stale_report"


def test_availability_identical_replay_is_noop_ack(client):
    first = post_report(client, "Ana/Van_1", True, "2024-03-01T10:00:00Z")
    assert first.status_code == 200
    replay = post_report(client, "Ana/Van_1", True, "2024-03-01T10:00:00Z")
    assert replay.status_code == 200
    assert replay.json()["changed"] is False


def test_upsert_rescue_point_by_address(client):
    r = client.post(
        "/rescue-points",
        json={"address": "17 Winston Churchill Street, Compiègne",
              "nb_people": 100, "nb_disabled": 0, "priority": 1},
    )
    assert r.status_code == 200
    assert r.json()["id"] == "RescuePoint_01"
    points = client.get("/rescue-points").json()
    assert points[0]["nb_people"] == 100


def test_upsert_rescue_point_validation(client):
    r = client.post("/rescue-points", json={"address": "x", "nb_people": 0, "nb_disabled": 0})
    assert r.status_code == 400
    assert r.json()["code"] == "validation_error"


def test_upsert_rescue_point_geocode_failure(client):
    r = client.post("/rescue-points", json={"address": "Atlantis", "nb_people": 5})
    assert r.status_code == 400
    assert r.json()["code"] == "geocode_failure"


def recommend(client, points, options=None):
    body = {"points": points}
    if options:
        body["options"] = options
    return client.post("/recommendations", json=body)


def test_recommendation_happy_path(client):
    r = recommend(client, [
        {"address": "17 Winston Churchill Street, Compiègne", "nb_people": 12, "priority": 1},
        {"location": {"lat": 49.036, "lon": 2.0}, "nb_people": 8, "priority": 2},
    ])
    assert r.status_code == 200
    body = r.json()
    assert body["request_id"] == "req-000001"
    plan = body["plan"]
    assert plan["status"] == "optimal"
    assert [p["priority"] for p in plan["per_point"]] == [1, 2]
    assert all(p["seats_delivered"] >= p["demand_seats"] for p in plan["per_point"])
    # persisted for later review
    again = client.get(f"/recommendations/{body['request_id']}")
    assert again.json()["plan"] == plan


def test_recommendation_zero_points(client):
    r = recommend(client, [])
    assert r.status_code == 200
    plan = r.json()["plan"]
    assert plan["objective_s"] == 0.0
    assert plan["per_point"] == []


def test_recommendation_infeasible_demand(client):
    r = recommend(client, [{"location": {"lat": 49.009, "lon": 2.0}, "nb_people": 500}])
    assert r.status_code == 200
    plan = r.json()["plan"]
    assert plan["status"] == "infeasible"
    assert plan["per_point"][0]["deficit_seats"] == 500 - 22


def test_recommendation_no_available_resources(client):
    for rid in ("Ana/Van_1", "Bob/Van_2", "Cleo/SUV_1"):
        assert post_report(client, rid, False, "2024-03-01T10:00:00Z").status_code == 200
    r = recommend(client, [{"location": {"lat": 49.009, "lon": 2.0}, "nb_people": 5}])
    assert r.status_code == 400
    assert r.json()["code"] == "no_available_resources"


def test_accept_dispatches_resources(client):
    r = recommend(client, [{"location": {"lat": 49.009, "lon": 2.0}, "nb_people": 9}])
    rid = r.json()["request_id"]
    assigned = {a["resource_id"] for a in r.json()["plan"]["assignments"]}
    d = client.post(f"/recommendations/{rid}/decision", json={"decision": "accept"})
    assert d.status_code == 200
    assert set(d.json()["dispatched_resources"]) == assigned
    # dispatched resources never appear in later plans until re-reported
    r2 = recommend(client, [{"location": {"lat": 49.009, "lon": 2.0}, "nb_people": 9}])
    assigned2 = {a["resource_id"] for a in r2.json()["plan"]["assignments"]}
    assert assigned.isdisjoint(assigned2)
    # driver reports back in; the resource becomes plannable again
    post_report(client, sorted(assigned)[0], True, "2024-03-02T08:00:00Z")
    r3 = recommend(client, [{"location": {"lat": 49.009, "lon": 2.0}, "nb_people": 9}])
    assert r3.json()["plan"]["status"] == "optimal"


def test_second_decision_conflicts(client):
    r = recommend(client, [{"location": {"lat": 49.009, "lon": 2.0}, "nb_people": 5}])
    rid = r.json()["request_id"]
    assert client.post(f"/recommendations/{rid}/decision", json={"decision": "accept"}).status_code == 200
    again = client.post(f"/recommendations/{rid}/decision", json={"decision": "accept"})
    assert again.status_code == 409
    assert again.json()["code"] == "already_decided"


def test_revise_with_fewer_people_never_costs_more(client):
    r = recommend(client, [{"location": {"lat": 49.036, "lon": 2.0}, "nb_people": 13, "priority": 1}])
    rid = r.json()["request_id"]
    old_objective = r.json()["plan"]["objective_s"]
    d = client.post(
        f"/recommendations/{rid}/decision",
        json={"decision": "revise",
              "points": [{"location": {"lat": 49.036, "lon": 2.0}, "nb_people": 9, "priority": 1}]},
    )
    assert d.status_code == 200
    new = d.json()
    assert new["request_id"] != rid
    assert new["plan"]["objective_s"] <= old_objective + 1e-9
    # the original is now locked
    locked = client.post(f"/recommendations/{rid}/decision", json={"decision": "accept"})
    assert locked.status_code == 409


def test_unknown_request(client):
    r = client.post("/recommendations/req-999999/decision", json={"decision": "accept"})
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_request"


def test_shelter_upsert_and_listing(client):
    r = client.post("/shelters", json={"name": "New Hall", "capacity": 80,
                                       "location": {"lat": 49.018, "lon": 2.0}})
    assert r.status_code == 200
    sid = r.json()["id"]
    listed = {s["id"]: s for s in client.get("/shelters").json()}
    assert listed[sid]["capacity"] == 80


def test_invalid_body_is_problem_document(client):
    r = client.post("/rescue-points", json={"nb_people": -4})
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "validation_error"
    assert "details" in body


def test_role_tokens_enforced(tmp_path):
    g, gaz, resources, shelters = small_world()
    store = store_from_entities(resources, [], shelters)
    config = ServiceConfig(driver_token="drv-secret", decider_token="boss-secret")
    engine = Engine(config, store=store, graph=g, gazetteer=gaz)
    client = TestClient(create_app(config, engine))

    r = post_report(client, "Ana/Van_1", True, "2024-03-01T10:00:00Z")
    assert r.status_code == 401
    r = client.post(
        "/availability",
        headers={"Authorization": "Bearer drv-secret"},
        json={"resource_id": "Ana/Van_1", "available": True,
              "location": {"lat": 49.009, "lon": 2.0}, "reported_at": "2024-03-01T10:00:00Z"},
    )
    assert r.status_code == 200
    assert client.post("/recommendations", json={"points": []}).status_code == 401
    ok = client.post("/recommendations", headers={"Authorization": "Bearer boss-secret"},
                     json={"points": []})
    assert ok.status_code == 200


def test_kb_persisted_across_restart(tmp_path):
    g, gaz, resources, shelters = small_world()
    store = store_from_entities(resources, [], shelters)
    kb_path = tmp_path / "kb.tsv"
    config = ServiceConfig(kb_path=str(kb_path))
    engine = Engine(config, store=store, graph=g, gazetteer=gaz)
    client = TestClient(create_app(config, engine))
    post_report(client, "Ana/Van_1", False, "2024-03-01T10:00:00Z")
    assert kb_path.is_file()

    engine2 = Engine(config, graph=g, gazetteer=gaz)  # reloads from kb_path
    client2 = TestClient(create_app(config, engine2))
    resources2 = {x["id"]: x for x in client2.get("/resources").json()}
    assert resources2["Ana/Van_1"]["available"] is False


def test_event_log_is_append_only_jsonl(client, tmp_path):
    recommend(client, [{"location": {"lat": 49.009, "lon": 2.0}, "nb_people": 5}])
    log_path = tmp_path / "events.jsonl"
    lines = log_path.read_text(encoding="utf-8").splitlines()
    events = [json.loads(line) for line in lines]
    assert any(e["event"] == "recommendation" for e in events)
