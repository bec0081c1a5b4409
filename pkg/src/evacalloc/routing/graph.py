"""Road graph: file loading, validation and coordinate snapping.

Graph file format (structured text, ``#`` comments allowed):

    directed true|false
    node <id> <lat> <lon>
    edge <from> <to> <length_m> [speed_kmh]

Edges with no speed default to the 30 km/h urban estimate.  Parallel edges
are kept; the shortest one wins during routing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .geo import Coordinate, check_coordinate, haversine_distance

DEFAULT_SPEED_KMH = 30.0


class GraphFormatError(ValueError):
    def __init__(self, path, lineno: int | None, message: str):
        where = f"{path}:{lineno}: " if lineno else f"{path}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class Edge:
    from_node: str
    to_node: str
    length_m: float
    speed_kmh: float

    @property
    def travel_time_s(self) -> float:
        return self.length_m / (self.speed_kmh / 3.6)


@dataclass
class RoadGraph:
    """Directed weighted street graph; immutable once loaded."""

    nodes: dict[str, Coordinate] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    directed: bool = True

    def add_node(self, node_id: str, lat: float, lon: float) -> None:
        self.nodes[node_id] = check_coordinate(lat, lon)

    def add_edge(self, from_node: str, to_node: str, length_m: float, speed_kmh: float = DEFAULT_SPEED_KMH) -> None:
        if from_node not in self.nodes or to_node not in self.nodes:
            missing = from_node if from_node not in self.nodes else to_node
            raise ValueError(f"dangling edge endpoint: unknown node {missing!r}")
        if length_m <= 0:
            raise ValueError(f"edge length must be > 0, got {length_m}")
        if speed_kmh <= 0:
            raise ValueError(f"edge speed must be > 0, got {speed_kmh}")
        self.edges.append(Edge(from_node, to_node, float(length_m), float(speed_kmh)))

    def adjacency(self) -> dict[str, list[tuple[str, float]]]:
        """node -> [(neighbor, travel seconds)]; both directions when undirected."""
        adj: dict[str, list[tuple[str, float]]] = {n: [] for n in self.nodes}
        for e in self.edges:
            adj[e.from_node].append((e.to_node, e.travel_time_s))
            if not self.directed:
                adj[e.to_node].append((e.from_node, e.travel_time_s))
        return adj

    def snap_to_node(self, point: Coordinate) -> str:
        """Nearest node by great-circle distance; ties broken by smallest id."""
        if not self.nodes:
            raise ValueError("cannot snap on an empty graph")
        best_id, best_dist = None, float("inf")
        for node_id in sorted(self.nodes, key=node_sort_key):
            d = haversine_distance(point, self.nodes[node_id])
            if d < best_dist:
                best_id, best_dist = node_id, d
        return best_id


def node_sort_key(node_id: str):
    """Numeric ids order numerically, everything else lexicographically after."""
    return (0, int(node_id), "") if node_id.isdigit() else (1, 0, node_id)


def load_road_graph(path: str | Path) -> RoadGraph:
    """Parse and validate a graph file.

    Raises :class:`GraphFormatError` with the offending line number on parse
    errors, including edges that reference unknown nodes.
    """
    graph = RoadGraph()
    pending_edges: list[tuple[int, list[str]]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            kind = fields[0].lower()
            if kind == "directed":
                if len(fields) != 2 or fields[1].lower() not in ("true", "false"):
                    raise GraphFormatError(path, lineno, "expected 'directed true|false'")
                graph.directed = fields[1].lower() == "true"
            elif kind == "node":
                if len(fields) != 4:
                    raise GraphFormatError(path, lineno, "expected 'node <id> <lat> <lon>'")
                try:
                    graph.add_node(fields[1], float(fields[2]), float(fields[3]))
                except ValueError as exc:
                    raise GraphFormatError(path, lineno, str(exc)) from exc
            elif kind == "edge":
                if len(fields) not in (4, 5):
                    raise GraphFormatError(path, lineno, "expected 'edge <from> <to> <length_m> [speed_kmh]'")
                pending_edges.append((lineno, fields))
            else:
                raise GraphFormatError(path, lineno, f"unknown record {fields[0]!r}")
    if not graph.nodes:
        raise GraphFormatError(path, None, "graph file declares no nodes")
    # Edges resolve after all nodes so records may appear in any order.
    for lineno, fields in pending_edges:
        try:
            length = float(fields[3])
            speed = float(fields[4]) if len(fields) == 5 else DEFAULT_SPEED_KMH
            graph.add_edge(fields[1], fields[2], length, speed)
        except ValueError as exc:
            raise GraphFormatError(path, lineno, str(exc)) from exc
    return graph


def save_road_graph(graph: RoadGraph, path: str | Path) -> None:
    lines = [f"directed {'true' if graph.directed else 'false'}\n"]
    for node_id in sorted(graph.nodes, key=node_sort_key):
        lat, lon = graph.nodes[node_id]
        lines.append(f"node {node_id} {lat!r} {lon!r}\n")
    for e in graph.edges:
        lines.append(f"edge {e.from_node} {e.to_node} {e.length_m!r} {e.speed_kmh!r}\n")
    Path(path).write_text("".join(lines), encoding="utf-8", newline="")
