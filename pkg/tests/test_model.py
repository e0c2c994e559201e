"""Core model: field, nodes, statuses, deployment, unit-disk reachability."""

import math

import pytest

import vbtsim as v


def make_scenario(nodes, range_m=10.0, field=None, seed=0):
    field = field or v.Field(200, 200, 100, 100)
    return v.Scenario(field=field, nodes=nodes, sensing_range=range_m, rng_seed=seed)


def node(i, x, y, energy=v.E_INIT, status=v.NodeStatus.CANDIDATE_NON_TREE):
    return v.Node(id=i, x=x, y=y, energy=energy, status=status)


# ---------------------------------------------------------------- statuses

def test_classify_status_table():
    th, ef = 0.2, 2.048e-4
    assert v.classify_status(1.0, 3, th, ef) is v.NodeStatus.TREE
    assert v.classify_status(1.0, 0, th, ef) is v.NodeStatus.CANDIDATE_NON_TREE
    assert v.classify_status(0.1, 0, th, ef) is v.NodeStatus.PERMANENT_NON_TREE
    assert v.classify_status(1e-6, 0, th, ef) is v.NodeStatus.FAILED


def test_classify_status_boundaries():
    th, ef = 0.2, 2.048e-4
    # exactly Th still qualifies as relay material; exactly e_fail is not dead
    assert v.classify_status(th, 1, th, ef) is v.NodeStatus.TREE
    assert v.classify_status(th, 0, th, ef) is v.NodeStatus.CANDIDATE_NON_TREE
    assert v.classify_status(ef, 0, th, ef) is v.NodeStatus.PERMANENT_NON_TREE
    assert v.classify_status(ef * 0.999, 5, th, ef) is v.NodeStatus.FAILED


def test_node_is_alive():
    assert node(0, 1, 1).is_alive()
    assert not node(0, 1, 1, energy=0.0, status=v.NodeStatus.FAILED).is_alive()


# ---------------------------------------------------------------- field

def test_field_contains():
    f = v.Field(200, 200, 100, 100)
    assert f.contains(0, 0) and f.contains(200, 200) and f.contains(37.5, 199.9)
    assert not f.contains(-0.01, 5) and not f.contains(5, 200.01)


def test_field_sink_pos():
    assert v.Field(200, 200, 60, 80).sink_pos == (60.0, 80.0)


# ---------------------------------------------------------------- deployment

def test_deploy_single_node_in_bounds_with_full_energy():
    f = v.Field(200, 200, 100, 100)
    nodes = v.deploy_uniform(f, 1, seed=3)
    assert len(nodes) == 1
    n = nodes[0]
    assert 0 <= n.x <= 200 and 0 <= n.y <= 200
    assert n.energy == v.E_INIT
    assert n.status is v.NodeStatus.CANDIDATE_NON_TREE


def test_deploy_rejects_zero_nodes():
    with pytest.raises(ValueError):
        v.deploy_uniform(v.Field(200, 200, 100, 100), 0, seed=1)


def test_deploy_is_deterministic_per_seed():
    f = v.Field(200, 200, 100, 100)
    a = v.deploy_uniform(f, 200, seed=42)
    b = v.deploy_uniform(f, 200, seed=42)
    assert [(n.id, n.x, n.y, n.energy) for n in a] == [(n.id, n.x, n.y, n.energy) for n in b]
    c = v.deploy_uniform(f, 200, seed=43)
    assert [(n.x, n.y) for n in a] != [(n.x, n.y) for n in c]


def test_deploy_mean_position_matches_uniform_law():
    # standard error of the mean of U(0, 200) over 10000 draws
    f = v.Field(200, 200, 100, 100)
    nodes = v.deploy_uniform(f, 10000, seed=7)
    mean_x = sum(n.x for n in nodes) / len(nodes)
    tol = 3 * (200 / math.sqrt(12)) / math.sqrt(10000)
    assert abs(mean_x - 100.0) <= tol


def test_deploy_ids_are_dense_from_zero():
    nodes = v.deploy_uniform(v.Field(200, 200, 100, 100), 25, seed=9)
    assert [n.id for n in nodes] == list(range(25))


# ---------------------------------------------------------------- scenario

def test_scenario_positions_include_sink():
    sc = make_scenario([node(0, 10, 10)])
    pos = sc.positions()
    assert pos[v.SINK] == (100.0, 100.0)
    assert pos[0] == (10.0, 10.0)


def test_scenario_rejects_non_dense_ids():
    with pytest.raises(ValueError):
        make_scenario([node(0, 1, 1), node(2, 2, 2)])


def test_scenario_rejects_out_of_field_node():
    with pytest.raises(ValueError):
        make_scenario([node(0, 201, 5)])


def test_scenario_live_ids_excludes_failed():
    sc = make_scenario([node(0, 1, 1), node(1, 2, 2, energy=0.0, status=v.NodeStatus.FAILED)])
    assert sc.live_ids() == [0]


# ---------------------------------------------------------------- reachability

def test_distance_is_euclidean():
    assert v.distance((0, 0), (3, 4)) == 5.0


def test_reachability_boundary_is_inclusive():
    sc = make_scenario([node(0, 0, 0), node(1, 0, 10)], range_m=10.0)
    g = v.build_reachability(sc)
    assert 1 in g.neighbors(0) and 0 in g.neighbors(1)


def test_reachability_just_beyond_range_absent():
    sc = make_scenario([node(0, 0, 0), node(1, 0, 10.01)], range_m=10.0)
    g = v.build_reachability(sc)
    assert 1 not in g.neighbors(0) and 0 not in g.neighbors(1)


def test_reachability_matches_brute_force_oracle():
    f = v.Field(200, 200, 100, 100)
    for seed in (11, 12, 13):
        nodes = v.deploy_uniform(f, 50, seed=seed)
        sc = v.Scenario(f, nodes, 35.0, seed)
        g = v.build_reachability(sc)
        pos = sc.positions()
        ids = list(pos)
        for a in ids:
            expect = sorted(
                b for b in ids
                if b != a and math.dist(pos[a], pos[b]) <= 35.0
            )
            assert list(g.neighbors(a)) == expect


def test_reachability_symmetric_no_self_loops():
    f = v.Field(200, 200, 100, 100)
    nodes = v.deploy_uniform(f, 60, seed=21)
    g = v.build_reachability(v.Scenario(f, nodes, 30.0, 21))
    for a in list(range(60)) + [v.SINK]:
        assert a not in g.neighbors(a)
        for b in g.neighbors(a):
            assert a in g.neighbors(b)


def test_neighbor_ids_are_plain_ints():
    sc = make_scenario([node(0, 99, 99)], range_m=10.0)
    g = v.build_reachability(sc)
    assert all(type(x) is int for x in g.neighbors(v.SINK))


# ---------------------------------------------------------------- connectivity

def test_single_node_within_sink_range_connected():
    sc = make_scenario([node(0, 95, 100)], range_m=10.0)
    assert v.is_connected_to_sink(v.build_reachability(sc))


def test_isolated_node_disconnects():
    sc = make_scenario([node(0, 95, 100), node(1, 0, 0)], range_m=10.0)
    assert not v.is_connected_to_sink(v.build_reachability(sc))


def test_failed_nodes_do_not_count_against_connectivity():
    sc = make_scenario(
        [node(0, 95, 100), node(1, 0, 0, energy=0.0, status=v.NodeStatus.FAILED)],
        range_m=10.0,
    )
    g = v.build_reachability(sc)
    assert not v.is_connected_to_sink(g)
    assert v.is_connected_to_sink(g, alive=sc.live_ids())


def test_sparse_200_node_networks_mostly_disconnected():
    # 200 nodes at range 20 in a 200x200 field sit below the connectivity
    # threshold; use the harness's canonical per-attempt seed derivation.
    f = v.Field(200, 200, 100, 100)
    disconnected = 0
    for attempt in range(50):
        seed = v.attempt_seed(0, 20.0, attempt)
        nodes = v.deploy_uniform(f, 200, seed=seed)
        g = v.build_reachability(v.Scenario(f, nodes, 20.0, seed))
        if not v.is_connected_to_sink(g):
            disconnected += 1
    assert disconnected >= 48  # at least 95% of 50


def test_multihop_chain_is_connected():
    chain = [node(i, 100 + 9 * (i + 1), 100) for i in range(5)]
    sc = make_scenario(chain, range_m=10.0)
    assert v.is_connected_to_sink(v.build_reachability(sc))
