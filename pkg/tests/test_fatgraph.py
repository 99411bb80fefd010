import random

import pytest

from orbicluster import fatgraph
from orbicluster.fatgraph import (LIBRARY, Spine, SpineError, boundary_walks, build_spine,
                                  expected_edge_count, poisson_center, poisson_matrix,
                                  poisson_report, validate)


def test_torus_with_hole_is_valid():
    rep = validate(fatgraph.torus_with_hole(), 1, 1, 0)
    assert rep["valid"] and rep["E"] == 3


def test_two_orbifold_torus_is_valid_with_seven_edges():
    sp = fatgraph.two_orbifold_torus()
    rep = validate(sp, 1, 1, 2)
    assert rep["valid"] and rep["E"] == 7
    assert sorted(sp.names.values()) == ["A", "B", "Y2", "Y3", "Y4", "Z1", "Z2"]
    assert sp.pending_edges() == [1, 2]


def test_wrong_orbifold_count_is_reported():
    rep = validate(fatgraph.two_orbifold_torus(), 1, 1, 1)
    assert not rep["valid"]
    assert any("edge count" in p for p in rep["problems"])


@pytest.mark.parametrize("name", sorted(LIBRARY))
def test_library_edge_counts(name):
    sp = LIBRARY[name]()
    g, s, r = sp.surface
    assert len(sp.edges) == expected_edge_count(g, s, r)
    assert validate(sp)["valid"]


def test_boundary_walks():
    walks = boundary_walks(fatgraph.torus_with_hole())
    assert len(walks) == 1 and sorted(walks[0]) == [1, 1, 2, 2, 3, 3]
    assert len(boundary_walks(fatgraph.theta_graph())) == 3
    walks = boundary_walks(fatgraph.two_orbifold_torus())
    assert len(walks) == 1
    assert walks[0].count(1) == 2 and walks[0].count(2) == 2


def test_single_vertex_bracket():
    # one trivalent vertex with three pending edges: a sphere with three cone points
    sp = build_spine([(0, 2, 4)], {1: (0, 1), 2: (2, 3), 3: (4, 5)}, pending={1: 2, 3: 2, 5: 2},
                     surface=(0, 1, 3))
    B = poisson_matrix(sp)
    assert B[0][1] == 1 and B[1][2] == 1 and B[2][0] == 1


def test_torus_bracket_and_center():
    sp = fatgraph.torus_with_hole()
    B = poisson_matrix(sp)
    assert all(abs(B[i][j]) == 2 for i in range(3) for j in range(3) if i != j)
    assert poisson_center(sp) == [[2, 2, 2]]


def test_orbifold_center_counts_pending_twice():
    sp = fatgraph.two_orbifold_torus()
    (v,) = poisson_center(sp)
    labels = sp.labels
    assert v[labels.index(1)] == 2 and v[labels.index(2)] == 2
    assert poisson_report(sp)["ok"]


def test_two_holes_give_two_center_vectors():
    rep = poisson_report(fatgraph.two_holed_torus())
    assert rep["s"] == 2 and rep["kernel_dim"] == 2 and rep["center_rank"] == 2 and rep["ok"]


def test_random_spines_have_center_of_dimension_s():
    rng = random.Random(11)
    for _ in range(60):
        t = rng.choice([2, 4, 6, 8])
        sp = fatgraph.random_spine(rng, t, rng.choice([0, 2, 4]) if t > 2 else rng.choice([0, 2]))
        assert validate(sp)["valid"]
        rep = poisson_report(sp)
        assert rep["skew"] and rep["ok"], rep


def test_json_roundtrip():
    sp = fatgraph.two_orbifold_torus(shear={3: 0.25})
    back = Spine.from_json(sp.to_json())
    assert back.to_json() == sp.to_json()
    assert back.shear[3] == 0.25


def test_bad_spine_is_rejected():
    with pytest.raises(SpineError):
        build_spine([(0, 2, 4)], {1: (0, 1), 2: (2, 3)})
