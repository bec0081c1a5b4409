from evacalloc.allocator import assign_shelters, solve_exact
from evacalloc.allocator.model import AllocationInstance, InstancePoint, InstanceResource
from evacalloc.kb.entities import Shelter
from evacalloc.routing.graph import RoadGraph


def chain_graph():
    """Nodes 1..6 in a row, 100 s per hop."""
    g = RoadGraph(directed=False)
    for i in range(1, 7):
        g.add_node(str(i), 49.0 + i * 0.009, 2.0)
    for i in range(1, 6):
        g.add_edge(str(i), str(i + 1), 1000, 36)
    return g


def shelf(sid, node_lat, capacity, occupied=0):
    return Shelter(id=sid, capacity=capacity, occupied=occupied, location=(node_lat, 2.0))


def node_lat(i):
    return 49.0 + i * 0.009


def solved_instance(points):
    """One big vehicle per point, co-located, so every point is served."""
    inst = AllocationInstance(
        points=[
            InstancePoint(id=pid, demand=people + 2 * dis, priority=pr, nb_people=people,
                          nb_disabled=dis, location=(node_lat(node), 2.0))
            for pid, people, dis, pr, node in points
        ],
        resources=[
            InstanceResource(id=f"R_{pid}", seats=people + 2 * dis)
            for pid, people, dis, pr, node in points
        ],
        times=[[0.0 if i == j else 10_000.0 for j in range(len(points))] for i in range(len(points))],
    )
    return inst, solve_exact(inst)


def test_whole_point_goes_to_nearest_fitting_shelter():
    g = chain_graph()
    inst, plan = solved_instance([("P1", 100, 0, 1, 1), ("P2", 72, 0, 2, 6)])
    shelters = [
        shelf("S_320", node_lat(2), 320),
        shelf("S_120", node_lat(4), 120),
        shelf("S_240", node_lat(5), 240),
    ]
    result = assign_shelters(plan, inst, shelters, g)
    assert result.diagnostics == []
    (leg1,) = result.by_point["P1"]
    assert leg1.shelter_id == "S_320"  # nearest to node 1 with room for 100
    assert leg1.persons == 100
    (leg2,) = result.by_point["P2"]
    assert leg2.shelter_id == "S_240"  # nearest to node 6 with room for 72
    assert result.occupancy == {"S_320": 100, "S_120": 0, "S_240": 72}


def test_zero_capacity_shelter_is_impossible():
    # capacity is a positive integer; a full shelter has no remaining room
    g = chain_graph()
    inst, plan = solved_instance([("P1", 10, 0, 1, 1)])
    shelters = [shelf("S_full", node_lat(1), 50, occupied=50), shelf("S_far", node_lat(6), 50)]
    result = assign_shelters(plan, inst, shelters, g)
    (leg,) = result.by_point["P1"]
    assert leg.shelter_id == "S_far"
    assert result.occupancy["S_full"] == 50


def test_split_only_when_no_single_shelter_fits():
    g = chain_graph()
    inst, plan = solved_instance([("P1", 150, 0, 1, 1)])
    shelters = [shelf("S_near", node_lat(2), 100), shelf("S_far", node_lat(5), 100)]
    result = assign_shelters(plan, inst, shelters, g)
    legs = result.by_point["P1"]
    assert [(leg.shelter_id, leg.persons) for leg in legs] == [("S_near", 100), ("S_far", 50)]


def test_total_capacity_boundary():
    g = chain_graph()
    capacities = [320, 120, 240]  # 680 places in total
    for evacuees, ok in ((500, True), (680, True), (700, False)):
        inst, plan = solved_instance([("P1", evacuees, 0, 1, 1)])
        shelters = [shelf(f"S{i}", node_lat(i + 2), c) for i, c in enumerate(capacities)]
        result = assign_shelters(plan, inst, shelters, g)
        placed = sum(leg.persons for legs in result.by_point.values() for leg in legs)
        if ok:
            assert placed == evacuees
            assert result.diagnostics == []
        else:
            assert placed == 680
            assert any("shelter_capacity_exhausted" in d for d in result.diagnostics)


def test_disabled_count_evacuates_people_not_seats():
    g = chain_graph()
    inst, plan = solved_instance([("P1", 4, 3, 1, 1)])  # demand 10 seats, 7 persons
    shelters = [shelf("S", node_lat(2), 7)]
    result = assign_shelters(plan, inst, shelters, g)
    (leg,) = result.by_point["P1"]
    assert leg.persons == 7
    assert result.diagnostics == []


def test_unserved_points_get_no_shelter():
    inst = AllocationInstance(
        points=[InstancePoint(id="P1", demand=10, priority=1, nb_people=10, nb_disabled=0,
                              location=(node_lat(1), 2.0))],
        resources=[],
        times=[[]],
    )
    plan = solve_exact(inst)
    assert plan.status == "infeasible"
    result = assign_shelters(plan, inst, [shelf("S", node_lat(2), 50)], chain_graph())
    assert result.by_point == {}
    assert result.occupancy == {"S": 0}
