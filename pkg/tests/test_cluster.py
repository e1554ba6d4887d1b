import pytest

from cyclab.cluster import (
    FiniteType,
    InfiniteWithinCap,
    Seed,
    check_subcluster,
    classify_type,
    explore,
    initial_seed,
    seed_mutate,
)
from cyclab.errors import FrozenVertex
from cyclab.foundation import LaurentPoly
from cyclab.quiver import MultiQuiver

PT3 = {"x1": 1, "x2": 2, "x3": 1}
PT4 = {"x1": 1, "x2": 2, "x3": 1, "x4": 1}


def w3_seed():
    return initial_seed(MultiQuiver([1, 2, 3], (2, 3), {(1, 2): 2, (3, 1): 1}))


def w4_seed():
    return initial_seed(
        MultiQuiver([1, 2, 3, 4], (3, 4), {(1, 2): 2, (2, 3): 2, (3, 1): 1, (4, 2): 1})
    )


def test_rank_one_involution():
    s = initial_seed(MultiQuiver([1]))
    m = seed_mutate(s, 1)
    assert m.assignment[1] == LaurentPoly(("x1",), {(-1,): 2})
    back = seed_mutate(m, 1)
    assert back == s and back.assignment[1] == s.assignment[1]


def test_frozen_vertex_rejected():
    with pytest.raises(FrozenVertex):
        seed_mutate(w3_seed(), 2)


def test_a2_pentagon():
    s = initial_seed(MultiQuiver([1, 2], (), {(1, 2): 1}))
    g = explore(s, depth=16, node_cap=100)
    assert len(g.nodes) == 5 and g.complete
    assert len(g.variables()) == 5
    assert sorted(g.degrees()) == [2] * 5


def test_classification():
    a2 = classify_type(initial_seed(MultiQuiver([1, 2], (), {(1, 2): 1})))
    assert isinstance(a2, FiniteType)
    assert a2.name == "A2" and a2.clusters == 5
    a1 = classify_type(initial_seed(MultiQuiver([1])))
    assert isinstance(a1, FiniteType) and a1.name == "A1" and a1.clusters == 2
    kron = classify_type(
        initial_seed(MultiQuiver([1, 2], (), {(1, 2): 2})), depth=8, node_cap=64
    )
    assert isinstance(kron, InfiniteWithinCap)


def test_w3_closure_is_a_pair():
    g = explore(w3_seed(), depth=6, node_cap=100)
    assert len(g.nodes) == 2 and g.complete
    m = seed_mutate(w3_seed(), 1)
    assert m.assignment[1].evaluate(PT3) == 5  # (x2^2 + x3) / x1 at (1, 2, 1)


def test_w4_mutation_values():
    s = w4_seed()
    mu1 = seed_mutate(s, 1)
    assert mu1.assignment[1].evaluate(PT4) == 5
    mu2 = seed_mutate(s, 2)
    assert mu2.assignment[2].evaluate(PT4) == 1
    psi = seed_mutate(mu1, 2)
    assert psi.assignment[2].evaluate(PT4) == 13
    omega = seed_mutate(mu2, 1)
    assert omega.assignment[1].evaluate(PT4) == 2
    sigma = seed_mutate(omega, 2)
    assert sigma.assignment[2].evaluate(PT4) == 5
    xi = seed_mutate(psi, 1)
    assert xi.assignment[1].evaluate(PT4) == 34


def test_w4_first_appearances_by_depth():
    g = explore(w4_seed(), depth=3, node_cap=100)
    byd = g.new_variables_by_depth()
    assert [len(byd[d]) for d in (1, 2, 3)] == [2, 2, 2]
    assert sorted(p.evaluate(PT4) for p in byd[2]) == [2, 13]
    assert sorted(p.evaluate(PT4) for p in byd[3]) == [5, 34]


def test_w4_depth_five_graph_shape():
    g = explore(w4_seed(), depth=5, node_cap=100)
    assert len(g.nodes) == 11
    assert not g.complete
    assert sorted(g.degrees()) == [1, 1] + [2] * 9


def test_subcluster_accepts_w3_inside_w4():
    sub = Seed(w3_seed().quiver, w3_seed().assignment, (2, 3))
    amb = Seed(w4_seed().quiver, w4_seed().assignment, (3, 4))
    ok, rep = check_subcluster(sub, amb, {1: 1, 2: 2, 3: 3})
    assert ok and all(rep.values())
    ok2, _ = check_subcluster(amb, amb, {v: v for v in (1, 2, 3, 4)})
    assert ok2


def test_subcluster_detects_missing_arrow():
    sub = Seed(w3_seed().quiver, w3_seed().assignment, (2, 3))
    # same vertices but the 3 -> 1 arrow is gone: S2 must fail
    qbad = MultiQuiver([1, 2, 3, 4], (3, 4), {(1, 2): 2, (2, 3): 2, (4, 2): 1})
    bad = Seed(qbad, w4_seed().assignment, (3, 4))
    ok, rep = check_subcluster(sub, bad, {1: 1, 2: 2, 3: 3})
    assert not ok and not rep["S2"]


def test_subcluster_checks_inversions():
    sub = Seed(w3_seed().quiver, w3_seed().assignment, ())
    amb = Seed(w4_seed().quiver, w4_seed().assignment, (3, 4))
    ok, rep = check_subcluster(sub, amb, {1: 1, 2: 2, 3: 3})
    assert not ok
    assert rep["S1"] and rep["S2"] and not rep["S3"]


def test_bfs_and_dfs_agree():
    s = initial_seed(MultiQuiver([1, 2], (), {(1, 2): 1}))
    bfs = explore(s, depth=16, node_cap=100)
    dfs = explore(s, depth=16, node_cap=100, order="dfs")
    assert {x.key() for x in bfs.nodes} == {x.key() for x in dfs.nodes}


def test_seed_json_round_trip():
    s = Seed(w4_seed().quiver, w4_seed().assignment, (3, 4))
    back = Seed.from_json(s.to_json())
    assert back == s and back.inverted == s.inverted
    assert back.to_json() == s.to_json()


def test_exchange_graph_dot_mentions_every_node():
    g = explore(w3_seed(), depth=6, node_cap=100)
    dot = g.to_dot()
    assert dot.count("[shape=") == len(g.nodes)
    assert "n0 [shape=doublecircle]" in dot
    assert 'n0 -- n1 [label="1"]' in dot
