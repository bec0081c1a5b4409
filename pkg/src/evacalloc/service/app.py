"""HTTP surface: availability reporting, KB management, recommendations.

Endpoints (JSON bodies, UTF-8):

    GET  /health
    POST /availability                     driver role
    GET  /availability/{resource_id}       volunteer poll stub
    GET  /resources
    POST /rescue-points                    decision-maker role
    GET  /rescue-points
    POST /shelters                         decision-maker role
    GET  /shelters
    POST /recommendations                  decision-maker role
    GET  /recommendations/{request_id}
    POST /recommendations/{request_id}/decision

Errors are machine-readable problem documents ``{code, message, details}``.
Role auth is a static bearer token per role; endpoints are open when the
corresponding token is not configured.
"""

from __future__ import annotations

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..pipeline import PointSpec, SolveOptions
from ..kb import entities as kbe
from .config import ServiceConfig
from .engine import Engine, ServiceError
from .schemas import (
    AvailabilityAck,
    AvailabilityReport,
    Coordinate,
    DecisionAck,
    DecisionRequest,
    RecommendationRequest,
    RecommendationResponse,
    RescuePointIn,
    RescuePointOut,
    ResourceOut,
    ShelterIn,
    ShelterOut,
)


def _spec_from_model(p: RescuePointIn) -> PointSpec:
    return PointSpec(
        nb_people=p.nb_people,
        nb_disabled=p.nb_disabled,
        priority=p.priority,
        id=p.id,
        address=p.address,
        location=(p.location.lat, p.location.lon) if p.location else None,
    )


def _options_from_model(o) -> SolveOptions:
    if o is None:
        return SolveOptions()
    return SolveOptions(solver=o.solver, fallback=o.fallback)


def _coord_out(location) -> Coordinate | None:
    return Coordinate(lat=location[0], lon=location[1]) if location else None


def create_app(
    config: ServiceConfig | None = None,
    engine: Engine | None = None,
) -> FastAPI:
    config = config or ServiceConfig.from_env()
    engine = engine or Engine(config)

    app = FastAPI(title="evacalloc", version="0.1.0")
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ServiceError)
    async def service_error_handler(_: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status_code, content=exc.problem)

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "code": "validation_error",
                "message": "invalid request body",
                "details": {"errors": [
                    {"loc": [str(p) for p in e["loc"]], "msg": e["msg"]} for e in exc.errors()
                ]},
            },
        )

    def require_role(token_attr: str):
        def checker(request: Request):
            expected = getattr(engine.config, token_attr)
            if expected is None:
                return
            header = request.headers.get("authorization", "")
            if header != f"Bearer {expected}":
                raise ServiceError(401, "unauthorized", f"valid {token_attr.replace('_token', '')} token required")
        return checker

    driver_auth = Depends(require_role("driver_token"))
    decider_auth = Depends(require_role("decider_token"))

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/availability", response_model=AvailabilityAck, dependencies=[driver_auth])
    def report_availability(report: AvailabilityReport):
        return engine.report_availability(
            resource_id=report.resource_id,
            available=report.available,
            location=(report.location.lat, report.location.lon),
            reported_at=report.reported_at,
        )

    # resource ids are driver/vehicle pairs and contain slashes
    @app.get("/availability/{resource_id:path}")
    def poll_availability(resource_id: str):
        return engine.resource_status(resource_id)

    @app.get("/resources", response_model=list[ResourceOut])
    def list_resources():
        return [
            ResourceOut(
                id=r.id,
                driver_id=r.driver_id,
                vehicle_id=r.vehicle_id,
                vehicle_class=r.vehicle_class.value,
                seats=r.seats,
                lying_places=r.lying_places,
                location=_coord_out(r.location),
                address=r.address,
                available=r.available,
            )
            for r in engine.materialize("moving_resources")
        ]

    @app.post("/rescue-points", dependencies=[decider_auth])
    def upsert_rescue_point(point: RescuePointIn):
        pid = engine.upsert_rescue_point(_spec_from_model(point))
        return {"id": pid}

    @app.get("/rescue-points", response_model=list[RescuePointOut])
    def list_rescue_points():
        return [
            RescuePointOut(
                id=p.id,
                address=p.address,
                location=_coord_out(p.location),
                nb_people=p.nb_people,
                nb_disabled=p.nb_disabled,
                priority=p.priority,
            )
            for p in engine.materialize("rescue_points")
        ]

    @app.post("/shelters", dependencies=[decider_auth])
    def upsert_shelter(shelter: ShelterIn):
        sid = engine.upsert_shelter(
            kbe.Shelter(
                id=shelter.id or "",
                capacity=shelter.capacity,
                occupied=shelter.occupied,
                name=shelter.name,
                address=shelter.address,
                location=(shelter.location.lat, shelter.location.lon) if shelter.location else None,
            )
        )
        return {"id": sid}

    @app.get("/shelters", response_model=list[ShelterOut])
    def list_shelters():
        return [
            ShelterOut(
                id=s.id,
                name=s.name,
                address=s.address,
                location=_coord_out(s.location),
                capacity=s.capacity,
                occupied=s.occupied,
            )
            for s in engine.materialize("shelters")
        ]

    @app.post("/recommendations", response_model=RecommendationResponse, dependencies=[decider_auth])
    def request_recommendations(request: RecommendationRequest):
        record = engine.request_recommendations(
            specs=[_spec_from_model(p) for p in request.points],
            options=_options_from_model(request.options),
        )
        return RecommendationResponse(
            request_id=record["request_id"], decided=record["decided"], plan=record["plan"]
        )

    @app.get("/recommendations/{request_id}", response_model=RecommendationResponse)
    def get_recommendation(request_id: str):
        record = engine.get_recommendation(request_id)
        return RecommendationResponse(
            request_id=record["request_id"], decided=record["decided"], plan=record["plan"]
        )

    @app.post("/recommendations/{request_id}/decision", dependencies=[decider_auth])
    def record_decision(request_id: str, decision: DecisionRequest):
        result = engine.record_decision(
            request_id=request_id,
            decision=decision.decision,
            specs=[_spec_from_model(p) for p in decision.points] if decision.points else None,
            options=_options_from_model(decision.options) if decision.options else None,
        )
        if decision.decision == "accept":
            return DecisionAck(**result)
        return RecommendationResponse(
            request_id=result["request_id"], decided=result["decided"], plan=result["plan"]
        )

    return app
