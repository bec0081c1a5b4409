"""Geospatial helpers: great-circle distance and the offline gazetteer."""

from __future__ import annotations

import math
import re
import unicodedata
from pathlib import Path

EARTH_RADIUS_M = 6_371_000.0

Coordinate = tuple[float, float]

_WS = re.compile(r"\s+")


class AddressNotFound(KeyError):
    def __init__(self, address: str):
        super().__init__(address)
        self.address = address

    def __str__(self) -> str:
        return f"address not found in gazetteer: {self.address!r}"


def check_coordinate(lat: float, lon: float) -> Coordinate:
    if not (-90.0 <= lat <= 90.0):
        raise ValueError(f"latitude {lat} outside [-90, 90]")
    if not (-180.0 <= lon <= 180.0):
        raise ValueError(f"longitude {lon} outside [-180, 180]")
    return (lat, lon)


def haversine_distance(a: Coordinate, b: Coordinate) -> float:
    """Great-circle distance in meters (spherical Earth, radius 6 371 km)."""
    lat1, lon1 = check_coordinate(*a)
    lat2, lon2 = check_coordinate(*b)
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def normalize_address(address: str) -> str:
    """Canonical lookup key: case-folded, accent-folded, punctuation and
    whitespace collapsed to single spaces.

    Underscore and comma variants ("17_Winston_Churchill_Street_Compiègne")
    normalize to the same key as the spelled-out address.
    """
    text = unicodedata.normalize("NFKD", address)
    text = "".join(ch for ch in text if not unicodedata.combining(ch))
    text = text.casefold()
    text = re.sub(r"[_,;]", " ", text)
    return _WS.sub(" ", text).strip()


class Gazetteer:
    """Local address -> coordinate lookup replacing an online geocoder.

    File format: one ``<normalized-address>\\t<lat>\\t<lon>`` entry per line,
    ``#`` comment lines, UTF-8.
    """

    def __init__(self, entries: dict[str, Coordinate] | None = None):
        self._entries: dict[str, Coordinate] = {}
        for key, coord in (entries or {}).items():
            self.add(key, coord)

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, address: str, coord: Coordinate) -> None:
        self._entries[normalize_address(address)] = check_coordinate(*coord)

    def geocode_address(self, address: str) -> Coordinate:
        key = normalize_address(address)
        try:
            return self._entries[key]
        except KeyError:
            raise AddressNotFound(address) from None

    @classmethod
    def load(cls, path: str | Path) -> "Gazetteer":
        gaz = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
                gaz.add(fields[0], (float(fields[1]), float(fields[2])))
        return gaz

    def save(self, path: str | Path) -> None:
        lines = [
            f"{key}\t{lat!r}\t{lon!r}\n"
            for key, (lat, lon) in sorted(self._entries.items())
        ]
        Path(path).write_text("".join(lines), encoding="utf-8", newline="")
