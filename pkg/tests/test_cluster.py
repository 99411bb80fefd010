import random

import pytest

from orbicluster import cluster
from orbicluster.cluster import (ExchangeMatrix, SeedError, check_laurent, finite_type_probe,
                                 generalized_mutate, make_seed, matrix_mutate, mutation_sequence,
                                 standard_mutate)
from orbicluster.laurent import LaurentPoly, parse_poly
from orbicluster.ring import omega


def test_matrix_mutation_examples():
    M = ExchangeMatrix(((0, 2), (-1, 0)), (2, 1))
    assert matrix_mutate(M, 0).B == ((0, -2), (1, 0))
    M3 = ExchangeMatrix(((0, 1, 0), (-1, 0, 1), (0, -1, 0)), (1, 1, 1))
    assert matrix_mutate(M3, 1).B == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


def test_matrix_mutation_is_involution(rng):
    for _ in range(50):
        seed = cluster.random_reciprocal_seed(rng, rng.randint(2, 4), 5)
        M = seed.matrix
        for k in range(M.n):
            assert matrix_mutate(matrix_mutate(M, k), k) == M
            assert not matrix_mutate(M, k).violations()


def test_standard_mutation_examples():
    seed = cluster.a2_seed()
    s1 = standard_mutate(seed, 0)
    x, y = (LaurentPoly.variable(v, seed.vars, seed.field) for v in "xy")
    assert s1.cluster[0] == (1 + y) / x
    assert standard_mutate(s1, 0) == seed


def test_generalized_mutation_is_involution(rng):
    for _ in range(20):
        seed = cluster.random_reciprocal_seed(rng, rng.randint(2, 3), 4)
        for k in range(seed.n):
            assert generalized_mutate(generalized_mutate(seed, k), k) == seed


def test_b2_first_steps():
    seed = cluster.b2_seed()
    vars, fld = seed.vars, seed.field
    s1 = generalized_mutate(seed, 0)
    assert s1.cluster[0] == parse_poly("x^-1 a + x^-1 y b + x^-1 y^2 c", vars, fld)
    rep = cluster.rank2_cycle_check("B2")
    y2 = next(c for c in rep["intermediates"] if c["name"] == "y2")
    assert y2["match"]


def test_orbifold_exchange_shape():
    for p in (3, 4, 5):
        seed = cluster.geometric_rank2_seed(p)
        x, y = (LaurentPoly.variable(v, seed.vars, seed.field) for v in "xy")
        w = LaurentPoly.constant(omega(p, seed.field), seed.vars, seed.field)
        assert generalized_mutate(seed, 0).cluster[0] == (1 + w * y + y * y) / x


@pytest.mark.parametrize("kind, period", [("A2", 5), ("B2", 6), ("G2", 8)])
def test_rank2_cycles(kind, period):
    rep = cluster.rank2_cycle_check(kind)
    assert rep["ok"], rep
    assert rep["period"] == period
    assert all(c["match"] for c in rep["intermediates"])


def test_empty_sequence_is_identity():
    seed = cluster.b2_seed()
    assert mutation_sequence(seed, []) == [seed]


def test_finite_type_rank2_laurent_depth_20():
    for seed in (cluster.a2_seed(), cluster.geometric_rank2_seed(4),
                 make_seed([[0, -3], [1, 0]], [3, 1], [[1, 1, 1, 1], [1, 1]])):
        rep = check_laurent(seed, [k % 2 for k in range(20)])
        assert rep["ok"] and rep["steps"] == 20


def test_random_rank3_sequences_are_laurent():
    rng = random.Random(7)
    seed = make_seed([[0, 2, -2], [-1, 0, 1], [1, -1, 0]], [2, 1, 1],
                     [[1, 1, 1], [1, 1], [1, 1]])
    for _ in range(20):
        dirs = cluster.random_directions(rng, 3, 10)
        rep = check_laurent(seed, dirs, term_budget=200_000)
        assert rep["ok"], rep


def test_corrupted_matrix_is_a_precondition_error():
    with pytest.raises(SeedError):
        make_seed([[0, 1], [-1, 0]], [2, 1], [[1, 1, 1], [1, 1]])
    with pytest.raises(SeedError):
        make_seed([[0, 2], [-3, 0]], [1, 1], [[1, 1], [1, 1]])


def test_fixed_mode_needs_reciprocal_tuples():
    with pytest.raises(SeedError):
        make_seed([[0, -2], [1, 0]], [2, 1], [[1, 2, 3], [1, 1]])


def test_finite_type_probe_counts():
    assert finite_type_probe(cluster.a2_seed())["variable_count"] == 5
    rep = finite_type_probe(cluster.geometric_rank2_seed(4))
    assert rep["finite"] is True and rep["variable_count"] == 6
    g2 = make_seed([[0, -3], [1, 0]], [3, 1], [[1, 1, 1, 1], [1, 1]])
    assert finite_type_probe(g2)["variable_count"] == 8


def test_finite_type_probe_infinite_case():
    seed = make_seed([[0, 4], [-1, 0]], [4, 1], [[1, 1, 1, 1, 1], [1, 1]])
    rep = finite_type_probe(seed, max_variables=14)
    assert rep["finite"] == "unknown"


def test_seed_json_roundtrip():
    seed = cluster.geometric_rank2_seed(5)
    data = cluster.seed_to_json(seed, [5])
    back = cluster.seed_from_json(data)
    assert back == seed
    assert cluster.seed_to_json(back, [5]) == data


def test_laurent_sweep_small():
    rep = cluster.laurent_sweep(random.Random(3), samples=15, max_length=6)
    assert rep["ok"] and rep["inexact_divisions"] == 0
