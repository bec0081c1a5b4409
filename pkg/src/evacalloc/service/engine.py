"""Service engine: knowledge base access, recommendation log, decisions.

All KB mutations run under one writer lock and are persisted back to the
configured triple file; recommendation computations take an immutable entity
snapshot first, so in-flight solves never observe partial updates.  Every
request/response/decision is appended to a JSONL log for post-crisis review.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from pathlib import Path

from ..kb import entities as kbe
from ..kb import schema as S
from ..kb.store import TripleStore
from ..pipeline import PipelineError, PointSpec, SolveOptions, recommend
from ..routing.geo import Gazetteer
from ..routing.graph import RoadGraph, load_road_graph
from .config import ServiceConfig


class ServiceError(Exception):
    def __init__(self, status_code: int, code: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.status_code = status_code
        self.problem = {"code": code, "message": message, "details": details or {}}


class Engine:
    def __init__(
        self,
        config: ServiceConfig,
        store: TripleStore | None = None,
        graph: RoadGraph | None = None,
        gazetteer: Gazetteer | None = None,
    ):
        self.config = config
        self._lock = threading.RLock()
        self._store = store if store is not None else self._load_store(config)
        self.graph = graph if graph is not None else (load_road_graph(config.graph_path) if config.graph_path else None)
        self.gazetteer = gazetteer if gazetteer is not None else (
            Gazetteer.load(config.gazetteer_path) if config.gazetteer_path else None
        )
        self._last_report: dict[str, datetime] = {}
        self._records: dict[str, dict] = {}
        self._counter = 0

    @staticmethod
    def _load_store(config: ServiceConfig) -> TripleStore:
        if config.kb_path and Path(config.kb_path).is_file():
            return TripleStore.load(config.kb_path)
        store = TripleStore()
        if config.entities_path:
            resources, points, shelters = kbe.load_entities_file(config.entities_path)
            store.assert_all(kbe.serialize_entities(resources, points, shelters))
        return store

    # Persistence --------------------------------------------------------------

    def _persist_kb(self) -> None:
        if self.config.kb_path:
            self._store.save(self.config.kb_path)

    def _log_event(self, kind: str, payload: dict) -> None:
        if not self.config.log_path:
            return
        event = {"at": datetime.now(timezone.utc).isoformat(), "event": kind, **payload}
        with open(self.config.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False, sort_keys=True) + "\n")

    # KB views -----------------------------------------------------------------

    def snapshot(self) -> TripleStore:
        return self._store.snapshot()

    def materialize(self, kind: str):
        try:
            return kbe.materialize_entities(self._store, kind)
        except kbe.ConsistencyError as exc:
            raise ServiceError(
                409,
                "kb_inconsistent",
                "knowledge base fails consistency checks",
                {"violations": [v.as_dict() for v in exc.violations]},
            ) from exc

    def validate(self) -> list[kbe.Violation]:
        return kbe.validate_consistency(self._store)

    # Availability ---------------------------------------------------------------

    def report_availability(self, resource_id: str, available: bool, location, reported_at: datetime) -> dict:
        with self._lock:
            if not self._store.query_pattern(resource_id, S.RDF_TYPE, S.CLS_MOVING_RESOURCE):
                raise ServiceError(404, "unknown_resource", f"no moving resource {resource_id!r} in the knowledge base")
            if reported_at.tzinfo is None:
                reported_at = reported_at.replace(tzinfo=timezone.utc)
            status = S.STATUS_AVAILABLE if available else S.STATUS_UNAVAILABLE
            location_lit = S.format_location_literal(location[0], location[1])
            last = self._last_report.get(resource_id)
            if last is not None:
                same = (
                    self._store.value(resource_id, S.HAS_STATUS) == status
                    and self._store.value(resource_id, S.HAS_LOCATION) == location_lit
                )
                if reported_at < last or (reported_at == last and not same):
                    raise ServiceError(
                        409,
                        "stale_report",
                        f"report at {reported_at.isoformat()} is not newer than {last.isoformat()}",
                    )
                if reported_at == last and same:
                    return {"resource_id": resource_id, "available": available, "changed": False}
            changed = self._store.value(resource_id, S.HAS_STATUS) != status
            self._store.retract_matching(subject=resource_id, predicate=S.HAS_STATUS)
            self._store.retract_matching(subject=resource_id, predicate=S.HAS_LOCATION)
            self._store.assert_triple(resource_id, S.HAS_STATUS, status)
            self._store.assert_triple(resource_id, S.HAS_LOCATION, location_lit)
            self._last_report[resource_id] = reported_at
            self._persist_kb()
        self._log_event("availability", {"resource_id": resource_id, "available": available})
        return {"resource_id": resource_id, "available": available, "changed": changed}

    def resource_status(self, resource_id: str) -> dict:
        with self._lock:
            if not self._store.query_pattern(resource_id, S.RDF_TYPE, S.CLS_MOVING_RESOURCE):
                raise ServiceError(404, "unknown_resource", f"no moving resource {resource_id!r} in the knowledge base")
            status = self._store.value(resource_id, S.HAS_STATUS)
        return {
            "resource_id": resource_id,
            "available": status != S.STATUS_UNAVAILABLE,
        }

    # Rescue points and shelters ---------------------------------------------------

    def _mint_id(self, prefix: str, cls: str) -> str:
        existing = {t.subject for t in self._store.query_pattern(None, S.RDF_TYPE, cls)}
        n = 1
        while f"{prefix}_{n:02d}" in existing:
            n += 1
        return f"{prefix}_{n:02d}"

    def upsert_rescue_point(self, spec: PointSpec) -> str:
        bad = spec.validate()
        if bad:
            raise ServiceError(400, "validation_error", "invalid rescue point spec", {"fields": bad})
        with self._lock:
            pid = spec.id or self._mint_id("RescuePoint", S.CLS_RESCUE_POINT)
            location = spec.location
            if location is None and spec.address is not None and self.gazetteer is not None:
                try:
                    location = self.gazetteer.geocode_address(spec.address)
                except KeyError:
                    raise ServiceError(
                        400,
                        "geocode_failure",
                        f"address {spec.address!r} not found and no coordinates given",
                        {"entity_id": pid},
                    ) from None
            if location is None and spec.address is None:
                raise ServiceError(400, "validation_error", "either address or location is required")
            point = kbe.RescuePoint(
                id=pid,
                nb_people=spec.nb_people,
                nb_disabled=spec.nb_disabled,
                priority=spec.priority,
                address=spec.address,
                location=location,
            )
            self._store.retract_matching(subject=pid)
            self._store.assert_all(kbe.rescue_point_triples(point))
            self._persist_kb()
        self._log_event("rescue_point", {"id": pid})
        return pid

    def upsert_shelter(self, shelter: kbe.Shelter) -> str:
        with self._lock:
            sid = shelter.id or self._mint_id("Shelter", S.CLS_SHELTER)
            shelter = kbe.Shelter(
                id=sid,
                capacity=shelter.capacity,
                occupied=shelter.occupied,
                name=shelter.name,
                address=shelter.address,
                location=shelter.location,
            )
            self._store.retract_matching(subject=sid)
            self._store.assert_all(kbe.shelter_triples(shelter))
            self._persist_kb()
        self._log_event("shelter", {"id": sid})
        return sid

    # Recommendations ----------------------------------------------------------

    def request_recommendations(self, specs: list[PointSpec], options: SolveOptions) -> dict:
        if self.graph is None:
            raise ServiceError(503, "no_road_graph", "service started without a road graph")
        with self._lock:
            violations = self.validate()
            if violations:
                raise ServiceError(
                    409,
                    "kb_inconsistent",
                    "knowledge base fails consistency checks",
                    {"violations": [v.as_dict() for v in violations]},
                )
            resources = kbe.materialize_entities(self._store, "moving_resources")
            shelters = kbe.materialize_entities(self._store, "shelters")
            self._counter += 1
            request_id = f"req-{self._counter:06d}"
        options = SolveOptions(
            solver=options.solver, fallback=options.fallback, exact_cap=self.config.exact_cap
        )
        try:
            result = recommend(
                resources=resources,
                shelters=shelters,
                graph=self.graph,
                gazetteer=self.gazetteer,
                specs=specs,
                options=options,
            )
        except PipelineError as exc:
            raise ServiceError(400, exc.code, exc.message, exc.details) from exc
        record = {
            "request_id": request_id,
            "request": {
                "points": [spec.__dict__ for spec in specs],
                "options": {"solver": options.solver, "fallback": options.fallback},
            },
            "plan": result.document,
            "decided": None,
        }
        with self._lock:
            self._records[request_id] = record
        self._log_event("recommendation", {"request_id": request_id, "plan": result.document})
        return record

    def get_recommendation(self, request_id: str) -> dict:
        with self._lock:
            record = self._records.get(request_id)
        if record is None:
            raise ServiceError(404, "unknown_request", f"no recommendation {request_id!r}")
        return record

    def record_decision(
        self,
        request_id: str,
        decision: str,
        specs: list[PointSpec] | None = None,
        options: SolveOptions | None = None,
    ) -> dict:
        with self._lock:
            record = self._records.get(request_id)
            if record is None:
                raise ServiceError(404, "unknown_request", f"no recommendation {request_id!r}")
            if record["decided"] is not None:
                raise ServiceError(
                    409, "already_decided", f"recommendation {request_id} was already {record['decided']}"
                )
            if decision == "accept":
                dispatched = sorted(
                    {a["resource_id"] for a in record["plan"]["assignments"]}
                )
                for rid in dispatched:
                    self._store.retract_matching(subject=rid, predicate=S.HAS_STATUS)
                    self._store.assert_triple(rid, S.HAS_STATUS, S.STATUS_UNAVAILABLE)
                record["decided"] = "accept"
                self._persist_kb()
                self._log_event("decision", {"request_id": request_id, "decision": "accept", "dispatched": dispatched})
                return {"request_id": request_id, "decision": "accept", "dispatched_resources": dispatched}
        # Revise: re-run the pipeline with the amended specs, then mark the
        # original decided only once the new plan exists.
        new_record = self.request_recommendations(specs, options or SolveOptions())
        with self._lock:
            record = self._records[request_id]
            if record["decided"] is not None:
                raise ServiceError(
                    409, "already_decided", f"recommendation {request_id} was already {record['decided']}"
                )
            record["decided"] = "revise"
            record["revised_to"] = new_record["request_id"]
        self._log_event(
            "decision",
            {"request_id": request_id, "decision": "revise", "revised_to": new_record["request_id"]},
        )
        return new_record
