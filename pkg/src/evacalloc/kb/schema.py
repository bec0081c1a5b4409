"""Closed-world schema for the crisis-mobility ontology (``cmo``).

The knowledge base stores subject/predicate/object triples describing three
entity families and their hierarchy:

* resources, split into human, material and moving resources; a moving
  resource is the pairing of one driver with one vehicle,
* locations, split into rescue points and shelters,
* people, split into affected people and human resources.

The predicate vocabulary is fixed: anything outside it is rejected at
assertion time.  ``has_Priority``, ``has_Status``, ``nb_of_Lying_Place`` and
``has_Name`` are artifact additions to the core property set; they carry the
rescue-point priority, resource availability, vehicle lying places and the
shelter display name.  There is no reasoner: consistency is enforced by the
rule checks in :mod:`evacalloc.kb.entities`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

# Predicates ---------------------------------------------------------------

RDF_TYPE = "rdf:type"
IS_A_PART_OF = "is_a_Part_of"
NB_OF_SEAT = "nb_of_Seat"
NB_OF_LYING_PLACE = "nb_of_Lying_Place"
HAS_TOTAL_PEOPLE = "has_Total_People"
HAS_TOTAL_DISABLED = "has_Total_Disabled"
HAS_ADDRESS = "has_Address"
HAS_CAPACITY = "has_capacity"
HAS_PRIORITY = "has_Priority"
HAS_LOCATION = "has_Location"
HAS_STATUS = "has_Status"
HAS_NAME = "has_Name"

PREDICATES = frozenset(
    {
        RDF_TYPE,
        IS_A_PART_OF,
        NB_OF_SEAT,
        NB_OF_LYING_PLACE,
        HAS_TOTAL_PEOPLE,
        HAS_TOTAL_DISABLED,
        HAS_ADDRESS,
        HAS_CAPACITY,
        HAS_PRIORITY,
        HAS_LOCATION,
        HAS_STATUS,
        HAS_NAME,
    }
)

# Integer-valued properties.  "8_places" style literals are accepted on
# ingestion and normalized to the plain integer, so the solver can do
# arithmetic on them.
INT_PREDICATES = frozenset(
    {
        NB_OF_SEAT,
        NB_OF_LYING_PLACE,
        HAS_TOTAL_PEOPLE,
        HAS_TOTAL_DISABLED,
        HAS_CAPACITY,
        HAS_PRIORITY,
    }
)

# Properties that may carry at most one value per subject.
FUNCTIONAL_PREDICATES = frozenset(
    {
        NB_OF_SEAT,
        NB_OF_LYING_PLACE,
        HAS_TOTAL_PEOPLE,
        HAS_TOTAL_DISABLED,
        HAS_ADDRESS,
        HAS_CAPACITY,
        HAS_PRIORITY,
        HAS_LOCATION,
        HAS_STATUS,
        HAS_NAME,
    }
)

# Classes ------------------------------------------------------------------


class VehicleClass(str, Enum):
    MINIBUS = "Minibus"
    MINIVAN = "Minivan"
    VAN = "Van"
    CAMPERVAN = "Campervan"
    SUV = "SUV"
    BERLINE = "Berline"
    BOAT = "Boat"
    OTHER = "Other"


CMO = "cmo:"

CLS_RESOURCE = "cmo:Resource"
CLS_HUMAN_RESOURCE = "cmo:HumanResource"
CLS_MATERIAL_RESOURCE = "cmo:MaterialResource"
CLS_MOVING_RESOURCE = "cmo:MovingResource"
CLS_VEHICLE = "cmo:Vehicle"
CLS_DRIVER = "cmo:Driver"
CLS_LOCATION = "cmo:Location"
CLS_RESCUE_POINT = "cmo:RescuePoint"
CLS_SHELTER = "cmo:Shelter"
CLS_PEOPLE = "cmo:People"
CLS_AFFECTED_PEOPLE = "cmo:AffectedPeople"

VEHICLE_CLASS_NAMES = {CMO + vc.value: vc for vc in VehicleClass}

# Parent -> children.  Kept for schema documentation and class validation;
# no inference runs over it.
CLASS_HIERARCHY: dict[str, tuple[str, ...]] = {
    CLS_RESOURCE: (CLS_HUMAN_RESOURCE, CLS_MATERIAL_RESOURCE, CLS_MOVING_RESOURCE),
    CLS_MATERIAL_RESOURCE: (CLS_VEHICLE,),
    CLS_VEHICLE: tuple(sorted(VEHICLE_CLASS_NAMES)),
    CLS_HUMAN_RESOURCE: (CLS_DRIVER,),
    CLS_LOCATION: (CLS_RESCUE_POINT, CLS_SHELTER),
    CLS_PEOPLE: (CLS_AFFECTED_PEOPLE, CLS_HUMAN_RESOURCE),
}

CLASSES = frozenset(CLASS_HIERARCHY) | frozenset(
    c for children in CLASS_HIERARCHY.values() for c in children
)

STATUS_AVAILABLE = "available"
STATUS_UNAVAILABLE = "unavailable"
RESOURCE_STATUSES = frozenset({STATUS_AVAILABLE, STATUS_UNAVAILABLE})

# Literal handling ----------------------------------------------------------

Term = str | int | float

_INT_LITERAL = re.compile(r"^(-?\d+)(_[^\t\n]*)?$")


class TripleRejected(ValueError):
    """Raised when a triple fails schema validation on assertion."""

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


def _check_identifier(value: str, role: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise TripleRejected("invalid_term", f"{role} must be a non-empty string")
    if "\t" in value or "\n" in value:
        raise TripleRejected("invalid_term", f"{role} may not contain tabs or newlines")
    return value.strip()


def parse_int_literal(obj: Term) -> int:
    """Parse an integer property value, accepting the ``8_places`` suffix form."""
    if isinstance(obj, bool):
        raise ValueError("boolean is not an integer literal")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        m = _INT_LITERAL.match(obj.strip())
        if m:
            return int(m.group(1))
    raise ValueError(f"not an integer literal: {obj!r}")


def parse_location_literal(obj: Term) -> tuple[float, float]:
    """Parse a ``lat,lon`` location literal and range-check it."""
    if not isinstance(obj, str):
        raise ValueError(f"location literal must be text, got {obj!r}")
    parts = obj.split(",")
    if len(parts) != 2:
        raise ValueError(f"location literal must be 'lat,lon': {obj!r}")
    lat, lon = (float(p) for p in parts)
    if not (-90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0):
        raise ValueError(f"coordinates out of range: {obj!r}")
    return lat, lon


def format_location_literal(lat: float, lon: float) -> str:
    return f"{lat!r},{lon!r}"


def normalize_object(predicate: str, obj: Term) -> Term:
    """Validate and canonicalize an object term for the given predicate.

    Raises :class:`TripleRejected` with reason ``type_conflict`` when the
    literal type contradicts the schema (non-integer seat counts, malformed
    coordinates, unknown classes).
    """
    if predicate in INT_PREDICATES:
        try:
            return parse_int_literal(obj)
        except ValueError as exc:
            raise TripleRejected("type_conflict", str(exc)) from exc
    if predicate == HAS_LOCATION:
        try:
            lat, lon = parse_location_literal(obj)
        except ValueError as exc:
            raise TripleRejected("type_conflict", str(exc)) from exc
        return format_location_literal(lat, lon)
    if predicate == RDF_TYPE:
        cls = _check_identifier(str(obj), "class")
        if cls not in CLASSES:
            raise TripleRejected("type_conflict", f"unknown class {cls!r}")
        return cls
    if predicate == IS_A_PART_OF:
        return _check_identifier(str(obj), "part target")
    # Text-valued properties (address, name, status).
    if not isinstance(obj, str):
        obj = str(obj)
    if "\t" in obj or "\n" in obj:
        raise TripleRejected("type_conflict", "literal may not contain tabs or newlines")
    return obj


@dataclass(frozen=True)
class Triple:
    """One subject/predicate/object fact, the KB's atomic unit."""

    subject: str
    predicate: str
    object: Term

    def __post_init__(self):
        object.__setattr__(self, "subject", _check_identifier(self.subject, "subject"))
        predicate = _check_identifier(self.predicate, "predicate")
        if predicate not in PREDICATES:
            raise TripleRejected("unknown_predicate", f"predicate {predicate!r} is not in the schema vocabulary")
        object.__setattr__(self, "predicate", predicate)
        object.__setattr__(self, "object", normalize_object(predicate, self.object))

    def sort_key(self) -> tuple[str, str, str]:
        return (self.subject, self.predicate, object_repr(self.object))


def object_repr(obj: Term) -> str:
    """Canonical text form of an object term, as written to triple files."""
    if isinstance(obj, float):
        return repr(obj)
    return str(obj)


def object_from_text(text: str) -> Term:
    """Inverse of :func:`object_repr` for file loading: int, then float, then text."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text
