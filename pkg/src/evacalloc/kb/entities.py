"""Typed entity views over the triple store.

``materialize_entities`` projects the triple graph onto the three typed
views (moving resources, rescue points, shelters); ``validate_consistency``
runs the schema rule checks and returns violations as data.  The soundness
contract: any subject that would fail to materialize is reported by
``validate_consistency`` first, so materialization on a clean store never
raises.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import schema as S
from .schema import Triple, VehicleClass
from .store import TripleStore

Coordinate = tuple[float, float]


@dataclass(frozen=True)
class MovingResource:
    """A civil/volunteer driver/vehicle pair, dispatched as one unit."""

    id: str
    driver_id: str
    vehicle_id: str
    vehicle_class: VehicleClass
    seats: int
    lying_places: int = 0
    location: Coordinate | None = None
    address: str | None = None
    available: bool = True


@dataclass(frozen=True)
class RescuePoint:
    """A demand site where affected people await transport."""

    id: str
    nb_people: int
    nb_disabled: int = 0
    priority: int = 1
    address: str | None = None
    location: Coordinate | None = None


@dataclass(frozen=True)
class Shelter:
    """A managed safe destination with a person capacity."""

    id: str
    capacity: int
    occupied: int = 0
    name: str | None = None
    address: str | None = None
    location: Coordinate | None = None


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str

    def as_dict(self) -> dict:
        return {"code": self.code, "subject": self.subject, "message": self.message}


class ConsistencyError(ValueError):
    """Materialization refused: the store violates schema rules."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        lines = ", ".join(f"{v.subject}: {v.code}" for v in violations[:5])
        more = "" if len(violations) <= 5 else f" (+{len(violations) - 5} more)"
        super().__init__(f"knowledge base inconsistent: {lines}{more}")


# Serialization: entities -> triples -----------------------------------------


def _location_triples(subject: str, location: Coordinate | None, address: str | None) -> list[Triple]:
    out = []
    if location is not None:
        out.append(Triple(subject, S.HAS_LOCATION, S.format_location_literal(*location)))
    if address is not None:
        out.append(Triple(subject, S.HAS_ADDRESS, address))
    return out


def resource_triples(r: MovingResource) -> list[Triple]:
    status = S.STATUS_AVAILABLE if r.available else S.STATUS_UNAVAILABLE
    triples = [
        Triple(r.id, S.RDF_TYPE, S.CLS_MOVING_RESOURCE),
        Triple(r.driver_id, S.RDF_TYPE, S.CLS_DRIVER),
        Triple(r.driver_id, S.IS_A_PART_OF, r.id),
        Triple(r.vehicle_id, S.RDF_TYPE, S.CMO + r.vehicle_class.value),
        Triple(r.vehicle_id, S.IS_A_PART_OF, r.id),
        Triple(r.vehicle_id, S.NB_OF_SEAT, r.seats),
        Triple(r.vehicle_id, S.NB_OF_LYING_PLACE, r.lying_places),
        Triple(r.id, S.HAS_STATUS, status),
    ]
    triples.extend(_location_triples(r.id, r.location, r.address))
    return triples


def rescue_point_triples(p: RescuePoint) -> list[Triple]:
    triples = [
        Triple(p.id, S.RDF_TYPE, S.CLS_RESCUE_POINT),
        Triple(p.id, S.HAS_TOTAL_PEOPLE, p.nb_people),
        Triple(p.id, S.HAS_TOTAL_DISABLED, p.nb_disabled),
        Triple(p.id, S.HAS_PRIORITY, p.priority),
    ]
    triples.extend(_location_triples(p.id, p.location, p.address))
    return triples


def shelter_triples(s: Shelter) -> list[Triple]:
    triples = [
        Triple(s.id, S.RDF_TYPE, S.CLS_SHELTER),
        Triple(s.id, S.HAS_CAPACITY, s.capacity),
        Triple(s.id, S.HAS_TOTAL_PEOPLE, s.occupied),
    ]
    if s.name is not None:
        triples.append(Triple(s.id, S.HAS_NAME, s.name))
    triples.extend(_location_triples(s.id, s.location, s.address))
    return triples


def serialize_entities(
    resources: list[MovingResource] = (),
    points: list[RescuePoint] = (),
    shelters: list[Shelter] = (),
) -> list[Triple]:
    triples: list[Triple] = []
    for r in resources:
        triples.extend(resource_triples(r))
    for p in points:
        triples.extend(rescue_point_triples(p))
    for s in shelters:
        triples.extend(shelter_triples(s))
    return triples


def store_from_entities(
    resources: list[MovingResource] = (),
    points: list[RescuePoint] = (),
    shelters: list[Shelter] = (),
) -> TripleStore:
    store = TripleStore()
    store.assert_all(serialize_entities(resources, points, shelters))
    return store


# Consistency checks ---------------------------------------------------------


def _subjects_of_type(store: TripleStore, cls: str) -> list[str]:
    return [t.subject for t in store.query_pattern(None, S.RDF_TYPE, cls)]


def _check_functional(store: TripleStore, subject: str, out: list[Violation]) -> None:
    for pred in sorted(S.FUNCTIONAL_PREDICATES):
        vals = store.values(subject, pred)
        if len(vals) > 1:
            out.append(
                Violation(
                    "functional_conflict",
                    subject,
                    f"{pred} carries {len(vals)} values, at most one allowed",
                )
            )


def _int_value(store: TripleStore, subject: str, pred: str) -> int | None:
    val = store.value(subject, pred)
    return val if isinstance(val, int) else None


def _check_moving_resources(store: TripleStore, out: list[Violation]) -> None:
    pair_ids = set(_subjects_of_type(store, S.CLS_MOVING_RESOURCE))
    # Parts must point at an actual moving resource and be typed driver/vehicle.
    for t in store.query_pattern(None, S.IS_A_PART_OF, None):
        if t.object not in pair_ids:
            out.append(
                Violation("dangling_part", t.subject, f"is_a_Part_of target {t.object!r} is not a moving resource")
            )
    for rid in sorted(pair_ids):
        _check_functional(store, rid, out)
        parts = [t.subject for t in store.query_pattern(None, S.IS_A_PART_OF, rid)]
        drivers, vehicles = [], []
        for part in parts:
            types = set(store.values(part, S.RDF_TYPE))
            if S.CLS_DRIVER in types:
                drivers.append(part)
            elif types & set(S.VEHICLE_CLASS_NAMES):
                vehicles.append(part)
            else:
                out.append(Violation("dangling_part", part, "pair part is neither a driver nor a vehicle"))
        if len(drivers) != 1:
            out.append(Violation("pair_cardinality", rid, f"{len(drivers)} drivers linked, exactly 1 required"))
        if len(vehicles) != 1:
            out.append(Violation("pair_cardinality", rid, f"{len(vehicles)} vehicles linked, exactly 1 required"))
        status = store.value(rid, S.HAS_STATUS)
        if status is not None and status not in S.RESOURCE_STATUSES:
            out.append(Violation("invalid_status", rid, f"status {status!r} not in {sorted(S.RESOURCE_STATUSES)}"))
        if len(vehicles) == 1:
            vehicle = vehicles[0]
            _check_functional(store, vehicle, out)
            seats = _int_value(store, vehicle, S.NB_OF_SEAT)
            lying = _int_value(store, vehicle, S.NB_OF_LYING_PLACE)
            if seats is None:
                out.append(Violation("missing_property", rid, f"vehicle {vehicle} has no nb_of_Seat"))
                continue
            if seats < 0 or (lying or 0) < 0:
                out.append(Violation("negative_count", rid, "seat and lying-place counts must be >= 0"))
            available = status != S.STATUS_UNAVAILABLE
            if available and seats >= 0 and (lying or 0) >= 0 and seats + (lying or 0) < 1:
                out.append(Violation("zero_capacity", rid, "available resource must offer at least one seat or lying place"))


def _check_rescue_points(store: TripleStore, out: list[Violation]) -> None:
    for pid in sorted(_subjects_of_type(store, S.CLS_RESCUE_POINT)):
        _check_functional(store, pid, out)
        people = _int_value(store, pid, S.HAS_TOTAL_PEOPLE)
        disabled = _int_value(store, pid, S.HAS_TOTAL_DISABLED)
        priority = _int_value(store, pid, S.HAS_PRIORITY)
        if people is None:
            out.append(Violation("missing_property", pid, "rescue point has no has_Total_People"))
            continue
        if people < 0 or (disabled or 0) < 0:
            out.append(Violation("negative_count", pid, "people counts must be >= 0"))
        elif people + (disabled or 0) < 1:
            out.append(Violation("zero_demand", pid, "rescue point has nobody to evacuate"))
        if priority is not None and priority < 1:
            out.append(Violation("invalid_priority", pid, "priority must be >= 1 (1 = highest)"))


def _check_shelters(store: TripleStore, out: list[Violation]) -> None:
    for sid in sorted(_subjects_of_type(store, S.CLS_SHELTER)):
        _check_functional(store, sid, out)
        capacity = _int_value(store, sid, S.HAS_CAPACITY)
        occupied = _int_value(store, sid, S.HAS_TOTAL_PEOPLE)
        if capacity is None:
            out.append(Violation("missing_property", sid, "shelter has no has_capacity"))
            continue
        if capacity < 1:
            out.append(Violation("nonpositive_capacity", sid, "capacity must be a positive integer"))
        if occupied is not None and occupied < 0:
            out.append(Violation("negative_count", sid, "occupied count must be >= 0"))
        elif occupied is not None and capacity >= 1 and occupied > capacity:
            out.append(Violation("capacity_exceeded", sid, f"occupied {occupied} exceeds capacity {capacity}"))


_KIND_CHECKS = {
    "moving_resources": _check_moving_resources,
    "rescue_points": _check_rescue_points,
    "shelters": _check_shelters,
}


def validate_consistency(store: TripleStore, kind: str | None = None) -> list[Violation]:
    """Schema rule checks; returns every violation (empty list = ok)."""
    checks = [_KIND_CHECKS[kind]] if kind else [_KIND_CHECKS[k] for k in sorted(_KIND_CHECKS)]
    out: list[Violation] = []
    snap = store.snapshot()
    for check in checks:
        check(snap, out)
    return out


# Materialization ------------------------------------------------------------


def _opt_location(store: TripleStore, subject: str) -> Coordinate | None:
    literal = store.value(subject, S.HAS_LOCATION)
    return S.parse_location_literal(literal) if literal is not None else None


def _opt_address(store: TripleStore, subject: str) -> str | None:
    val = store.value(subject, S.HAS_ADDRESS)
    return str(val) if val is not None else None


def _materialize_resources(store: TripleStore) -> list[MovingResource]:
    out = []
    for rid in sorted(set(_subjects_of_type(store, S.CLS_MOVING_RESOURCE))):
        parts = [t.subject for t in store.query_pattern(None, S.IS_A_PART_OF, rid)]
        driver = next(p for p in parts if S.CLS_DRIVER in store.values(p, S.RDF_TYPE))
        vehicle = next(p for p in parts if set(store.values(p, S.RDF_TYPE)) & set(S.VEHICLE_CLASS_NAMES))
        vclass = next(
            S.VEHICLE_CLASS_NAMES[c] for c in store.values(vehicle, S.RDF_TYPE) if c in S.VEHICLE_CLASS_NAMES
        )
        out.append(
            MovingResource(
                id=rid,
                driver_id=driver,
                vehicle_id=vehicle,
                vehicle_class=vclass,
                seats=store.value(vehicle, S.NB_OF_SEAT),
                lying_places=_int_value(store, vehicle, S.NB_OF_LYING_PLACE) or 0,
                location=_opt_location(store, rid),
                address=_opt_address(store, rid),
                available=store.value(rid, S.HAS_STATUS) != S.STATUS_UNAVAILABLE,
            )
        )
    return out


def _materialize_points(store: TripleStore) -> list[RescuePoint]:
    out = []
    for pid in sorted(set(_subjects_of_type(store, S.CLS_RESCUE_POINT))):
        out.append(
            RescuePoint(
                id=pid,
                nb_people=store.value(pid, S.HAS_TOTAL_PEOPLE),
                nb_disabled=_int_value(store, pid, S.HAS_TOTAL_DISABLED) or 0,
                priority=_int_value(store, pid, S.HAS_PRIORITY) or 1,
                address=_opt_address(store, pid),
                location=_opt_location(store, pid),
            )
        )
    return out


def _materialize_shelters(store: TripleStore) -> list[Shelter]:
    out = []
    for sid in sorted(set(_subjects_of_type(store, S.CLS_SHELTER))):
        name = store.value(sid, S.HAS_NAME)
        out.append(
            Shelter(
                id=sid,
                capacity=store.value(sid, S.HAS_CAPACITY),
                occupied=_int_value(store, sid, S.HAS_TOTAL_PEOPLE) or 0,
                name=str(name) if name is not None else None,
                address=_opt_address(store, sid),
                location=_opt_location(store, sid),
            )
        )
    return out


_MATERIALIZERS = {
    "moving_resources": _materialize_resources,
    "rescue_points": _materialize_points,
    "shelters": _materialize_shelters,
}


def materialize_entities(store: TripleStore, kind: str):
    """One typed entity per matching subject, deterministic order by id.

    Raises :class:`ConsistencyError` listing the offending subjects when the
    store fails the kind's consistency checks.
    """
    if kind not in _MATERIALIZERS:
        raise ValueError(f"unknown entity kind {kind!r}")
    snap = store.snapshot()
    violations = validate_consistency(snap, kind)
    if violations:
        raise ConsistencyError(violations)
    return _MATERIALIZERS[kind](snap)


# Entity bulk-load files ------------------------------------------------------


def _coord_to_json(c: Coordinate | None):
    return None if c is None else {"lat": c[0], "lon": c[1]}


def _coord_from_json(val) -> Coordinate | None:
    if val is None:
        return None
    return (float(val["lat"]), float(val["lon"]))


def entities_to_json(
    resources: list[MovingResource] = (),
    points: list[RescuePoint] = (),
    shelters: list[Shelter] = (),
) -> dict:
    return {
        "moving_resources": [
            {
                "id": r.id,
                "driver_id": r.driver_id,
                "vehicle_id": r.vehicle_id,
                "vehicle_class": r.vehicle_class.value,
                "seats": r.seats,
                "lying_places": r.lying_places,
                "location": _coord_to_json(r.location),
                "address": r.address,
                "available": r.available,
            }
            for r in resources
        ],
        "rescue_points": [
            {
                "id": p.id,
                "address": p.address,
                "location": _coord_to_json(p.location),
                "nb_people": p.nb_people,
                "nb_disabled": p.nb_disabled,
                "priority": p.priority,
            }
            for p in points
        ],
        "shelters": [
            {
                "id": s.id,
                "name": s.name,
                "address": s.address,
                "location": _coord_to_json(s.location),
                "capacity": s.capacity,
                "occupied": s.occupied,
            }
            for s in shelters
        ],
    }


def entities_from_json(doc: dict) -> tuple[list[MovingResource], list[RescuePoint], list[Shelter]]:
    resources = [
        MovingResource(
            id=e["id"],
            driver_id=e["driver_id"],
            vehicle_id=e["vehicle_id"],
            vehicle_class=VehicleClass(e["vehicle_class"]),
            seats=int(e["seats"]),
            lying_places=int(e.get("lying_places", 0)),
            location=_coord_from_json(e.get("location")),
            address=e.get("address"),
            available=bool(e.get("available", True)),
        )
        for e in doc.get("moving_resources", [])
    ]
    points = [
        RescuePoint(
            id=e["id"],
            nb_people=int(e["nb_people"]),
            nb_disabled=int(e.get("nb_disabled", 0)),
            priority=int(e.get("priority", 1)),
            address=e.get("address"),
            location=_coord_from_json(e.get("location")),
        )
        for e in doc.get("rescue_points", [])
    ]
    shelters = [
        Shelter(
            id=e["id"],
            capacity=int(e["capacity"]),
            occupied=int(e.get("occupied", 0)),
            name=e.get("name"),
            address=e.get("address"),
            location=_coord_from_json(e.get("location")),
        )
        for e in doc.get("shelters", [])
    ]
    return resources, points, shelters


def load_entities_file(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return entities_from_json(json.load(fh))


def save_entities_file(path: str | Path, resources=(), points=(), shelters=()) -> None:
    doc = entities_to_json(resources, points, shelters)
    Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
