"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from datetime import datetime
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class Coordinate(BaseModel):
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)


class AvailabilityReport(BaseModel):
    resource_id: str
    available: bool
    location: Coordinate
    reported_at: datetime


class AvailabilityAck(BaseModel):
    resource_id: str
    available: bool
    changed: bool


class RescuePointIn(BaseModel):
    id: Optional[str] = None
    address: Optional[str] = None
    location: Optional[Coordinate] = None
    nb_people: int = Field(ge=0)
    nb_disabled: int = Field(default=0, ge=0)
    priority: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _demand_and_place(self):
        if self.nb_people + self.nb_disabled < 1:
            raise ValueError("nb_people + nb_disabled must be >= 1")
        if self.address is None and self.location is None:
            raise ValueError("either address or location is required")
        return self


class RescuePointOut(BaseModel):
    id: str
    address: Optional[str]
    location: Optional[Coordinate]
    nb_people: int
    nb_disabled: int
    priority: int


class ShelterIn(BaseModel):
    id: Optional[str] = None
    name: Optional[str] = None
    address: Optional[str] = None
    location: Optional[Coordinate] = None
    capacity: int = Field(ge=1)
    occupied: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _occupancy(self):
        if self.occupied > self.capacity:
            raise ValueError("occupied must not exceed capacity")
        return self


class ShelterOut(BaseModel):
    id: str
    name: Optional[str]
    address: Optional[str]
    location: Optional[Coordinate]
    capacity: int
    occupied: int


class ResourceOut(BaseModel):
    id: str
    driver_id: str
    vehicle_id: str
    vehicle_class: str
    seats: int
    lying_places: int
    location: Optional[Coordinate]
    address: Optional[str]
    available: bool


class SolverOptions(BaseModel):
    solver: Literal["auto", "exact", "greedy"] = "auto"
    fallback: Literal["straight-line", "exclude"] = "straight-line"


class RecommendationRequest(BaseModel):
    points: list[RescuePointIn]
    options: SolverOptions = SolverOptions()


class RecommendationResponse(BaseModel):
    request_id: str
    decided: Optional[str] = None
    plan: dict


class DecisionRequest(BaseModel):
    decision: Literal["accept", "revise"]
    points: Optional[list[RescuePointIn]] = None
    options: Optional[SolverOptions] = None

    @model_validator(mode="after")
    def _revise_needs_points(self):
        if self.decision == "revise" and not self.points:
            raise ValueError("revise requires the amended rescue point specs")
        return self


class DecisionAck(BaseModel):
    request_id: str
    decision: str
    dispatched_resources: list[str] = []


class Problem(BaseModel):
    code: str
    message: str
    details: dict = {}
