import random

import pytest

from evacalloc.routing.geo import haversine_distance
from evacalloc.routing.graph import GraphFormatError, RoadGraph, load_road_graph


def write_graph(tmp_path, text):
    path = tmp_path / "graph.txt"
    path.write_text(text, encoding="utf-8")
    return path


def test_minimal_graph_loads(tmp_path):
    path = write_graph(
        tmp_path,
        """# tiny
directed true
node a 49.0 2.0
node b 49.01 2.0
edge a b 1000 36
""",
    )
    g = load_road_graph(path)
    assert len(g.nodes) == 2
    assert len(g.edges) == 1
    assert g.edges[0].travel_time_s == pytest.approx(100.0)


def test_edge_speed_defaults_to_30(tmp_path):
    g = load_road_graph(write_graph(tmp_path, "node a 0 0\nnode b 0.01 0\nedge a b 500\n"))
    assert g.edges[0].speed_kmh == 30.0


def test_dangling_edge_endpoint(tmp_path):
    path = write_graph(tmp_path, "node a 49.0 2.0\nedge a ghost 100\n")
    with pytest.raises(GraphFormatError, match="dangling edge endpoint"):
        load_road_graph(path)


def test_parse_error_carries_line_number(tmp_path):
    path = write_graph(tmp_path, "node a 49.0 2.0\nnode broken\n")
    with pytest.raises(GraphFormatError, match=":2"):
        load_road_graph(path)


def test_empty_graph_rejected(tmp_path):
    path = write_graph(tmp_path, "# nothing here\ndirected false\n")
    with pytest.raises(GraphFormatError, match="no nodes"):
        load_road_graph(path)


def test_unknown_record_rejected(tmp_path):
    path = write_graph(tmp_path, "street a b\n")
    with pytest.raises(GraphFormatError, match="unknown record"):
        load_road_graph(path)


def test_fixture_graph_node_count_matches_file(flood_dir):
    path = flood_dir / "graph.txt"
    declared = sum(1 for line in path.read_text(encoding="utf-8").splitlines() if line.startswith("node "))
    g = load_road_graph(path)
    assert len(g.nodes) == declared == 200


def test_snap_identity():
    g = RoadGraph()
    g.add_node("7", 49.0, 2.0)
    g.add_node("3", 50.0, 3.0)
    assert g.snap_to_node((50.0, 3.0)) == "3"


def test_snap_tie_prefers_smallest_id():
    g = RoadGraph()
    g.add_node("7", 49.0, 2.0)
    g.add_node("3", 49.0, 2.2)
    assert g.snap_to_node((49.0, 2.1)) == "3"


def test_snap_matches_exhaustive_scan():
    rng = random.Random(11)
    g = RoadGraph()
    for i in range(60):
        g.add_node(str(i), rng.uniform(49.0, 49.5), rng.uniform(2.0, 3.0))

    def oracle(point):
        best = None
        for node_id in g.nodes:
            d = haversine_distance(point, g.nodes[node_id])
            key = (d, (0, int(node_id), "") if node_id.isdigit() else (1, 0, node_id))
            if best is None or key < best[0]:
                best = (key, node_id)
        return best[1]

    for _ in range(1000):
        p = (rng.uniform(48.9, 49.6), rng.uniform(1.9, 3.1))
        assert g.snap_to_node(p) == oracle(p)
