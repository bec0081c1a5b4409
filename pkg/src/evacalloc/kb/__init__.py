"""Ontology-backed knowledge base: triple store, schema, typed entity views."""

from .entities import (
    ConsistencyError,
    MovingResource,
    RescuePoint,
    Shelter,
    Violation,
    entities_from_json,
    entities_to_json,
    load_entities_file,
    materialize_entities,
    save_entities_file,
    serialize_entities,
    store_from_entities,
    validate_consistency,
)
from .schema import Triple, TripleRejected, VehicleClass
from .store import TripleStore

__all__ = [
    "ConsistencyError",
    "MovingResource",
    "RescuePoint",
    "Shelter",
    "Triple",
    "TripleRejected",
    "TripleStore",
    "VehicleClass",
    "Violation",
    "entities_from_json",
    "entities_to_json",
    "load_entities_file",
    "materialize_entities",
    "save_entities_file",
    "serialize_entities",
    "store_from_entities",
    "validate_consistency",
]
