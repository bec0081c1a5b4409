"""Scenario bundles: a directory with everything needed for one offline run.

The manifest (``manifest.json``) names the five component files:

    {
      "entities":  "entities.json",
      "graph":     "graph.txt",
      "gazetteer": "gazetteer.tsv",
      "request":   "request.json",
      "expected":  "expected.json"      // optional golden plan document
    }

``run_scenario`` executes the same pipeline the service exposes and returns
the plan document, so CLI and service output can be compared byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .kb.entities import MovingResource, RescuePoint, Shelter, load_entities_file
from .pipeline import (
    PointSpec,
    RecommendationResult,
    SolveOptions,
    options_from_dict,
    point_spec_from_dict,
    recommend,
)
from .routing.geo import Gazetteer
from .routing.graph import RoadGraph, load_road_graph

MANIFEST_NAME = "manifest.json"
REQUIRED_PARTS = ("entities", "graph", "gazetteer", "request")


class MissingFileError(FileNotFoundError):
    def __init__(self, part: str, path: Path | None = None):
        self.part = part
        where = f" ({path})" if path else ""
        super().__init__(f"missing_file({part}){where}")


@dataclass
class ScenarioBundle:
    directory: Path
    resources: list[MovingResource]
    rescue_points: list[RescuePoint]
    shelters: list[Shelter]
    graph: RoadGraph
    gazetteer: Gazetteer
    specs: list[PointSpec]
    options: SolveOptions
    expected: dict | None = None


def load_scenario(directory: str | Path) -> ScenarioBundle:
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingFileError("manifest", manifest_path)
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    paths = {}
    for part in REQUIRED_PARTS:
        name = manifest.get(part)
        if not name:
            raise MissingFileError(part)
        path = directory / name
        if not path.is_file():
            raise MissingFileError(part, path)
        paths[part] = path

    resources, rescue_points, shelters = load_entities_file(paths["entities"])
    graph = load_road_graph(paths["graph"])
    gazetteer = Gazetteer.load(paths["gazetteer"])

    request = json.loads(paths["request"].read_text(encoding="utf-8"))
    specs = [point_spec_from_dict(p) for p in request.get("points", [])]
    options = options_from_dict(request.get("options"))

    expected = None
    if manifest.get("expected"):
        expected_path = directory / manifest["expected"]
        if not expected_path.is_file():
            raise MissingFileError("expected", expected_path)
        expected = json.loads(expected_path.read_text(encoding="utf-8"))

    return ScenarioBundle(
        directory=directory,
        resources=resources,
        rescue_points=rescue_points,
        shelters=shelters,
        graph=graph,
        gazetteer=gazetteer,
        specs=specs,
        options=options,
        expected=expected,
    )


def run_scenario(bundle: ScenarioBundle, options: SolveOptions | None = None) -> RecommendationResult:
    return recommend(
        resources=bundle.resources,
        shelters=bundle.shelters,
        graph=bundle.graph,
        gazetteer=bundle.gazetteer,
        specs=bundle.specs,
        options=options or bundle.options,
    )
