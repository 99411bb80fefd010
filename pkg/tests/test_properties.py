"""Property-based checks of algebraic invariants."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from orbicluster import fatgraph
from orbicluster.cluster import ExchangeMatrix, matrix_mutate
from orbicluster.geodesics import L_MAT, verify_pgon_identities, x_matrix
from orbicluster.laurent import LaurentPoly, exact_divide
from orbicluster.mcg import flip_inner, flip_pending
from orbicluster.ring import CyclotomicField, omega

FLD = CyclotomicField.for_orders([4, 5])
W4, W5 = omega(4, FLD), omega(5, FLD)
VARS = ("x", "y")

small = st.integers(-3, 3)
elems = st.tuples(small, small, small).map(lambda t: t[0] + t[1] * W4 + t[2] * W5)
monos = st.tuples(st.integers(-2, 2), st.integers(-2, 2))
polys = st.dictionaries(monos, elems, max_size=4).map(lambda d: LaurentPoly(VARS, FLD, d))
shear = st.floats(-3, 3, allow_nan=False)


@given(elems, elems, elems)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    if a:
        assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_division_roundtrip(f, g):
    if g.is_zero():
        return
    assert exact_divide(f * g, g) == f


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.floats(0.5, 2), st.floats(0.5, 2))
def test_arithmetic_commutes_with_evaluation(f, g, x, y):
    pt = {"x": x, "y": y}
    lhs = complex((f * g + f).evaluate(pt))
    rhs = complex(f.evaluate(pt)) * complex(g.evaluate(pt)) + complex(f.evaluate(pt))
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.lists(st.integers(1, 3), min_size=3, max_size=3),
       st.integers(0, 2))
def test_matrix_mutation_involution(beta, d, k):
    s = [[0, beta[0], beta[1]], [-beta[0], 0, beta[2]], [-beta[1], -beta[2], 0]]
    B = tuple(tuple(d[i] * s[i][j] for j in range(3)) for i in range(3))
    M = ExchangeMatrix(B, tuple(d))
    assert not M.violations()
    assert matrix_mutate(matrix_mutate(M, k), k) == M


@given(st.integers(2, 8), st.floats(0.01, 0.99))
def test_pgon_identities_hold(p, t):
    assert verify_pgon_identities(p, t * 2 * math.pi / p)["max_residual"] < 1e-9


@given(shear, shear)
def test_spiral_identity(Y, P):
    lhs = x_matrix(Y) @ L_MAT @ x_matrix(P) @ L_MAT @ x_matrix(Y)
    rhs = x_matrix(Y + P) @ L_MAT @ x_matrix(-P) @ L_MAT @ x_matrix(Y + P)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(lhs)))


@given(shear, shear, shear, st.integers(1, 3))
def test_torus_flip_involution(a, b, c, lab):
    sp = fatgraph.torus_with_hole({1: a, 2: b, 3: c})
    back, _ = flip_inner(flip_inner(sp, lab)[0], lab)
    assert max(abs(back.shear[l] - sp.shear[l]) for l in sp.labels) < 1e-12


@given(st.lists(shear, min_size=7, max_size=7), st.sampled_from([2, 3, 4, 6]))
def test_pending_flip_involution(vals, p):
    sp = fatgraph.two_orbifold_torus(p, p, dict(zip(range(1, 8), vals)))
    back, _ = flip_pending(flip_pending(sp, 2)[0], 2)
    assert max(abs(back.shear[l] - sp.shear[l]) for l in sp.labels) < 1e-12
