import cmath
import math
import random

import numpy as np
import pytest

from orbicluster import fatgraph
from orbicluster.geodesics import (L_MAT, PathWord, random_closed_walk, walk_trace, word_to_walk,
                                   x_matrix)
from orbicluster.mcg import (MoveError, apply_move, check_move_invariance, flip_inner, flip_pending,
                             invert_spiral, pending_flip_via_hole, pending_shifts, phi,
                             poisson_compatibility, transport_path, transport_walk)

LOG2, LOG3 = math.log(2), math.log(3)


def _random_shears(sp, rng, scale=1.0):
    return sp.with_shears({lab: rng.gauss(0, scale) for lab in sp.labels})


def test_inner_flip_at_zero():
    # two_holed_torus edge 2 has four distinct neighbours
    sp = fatgraph.theta_graph()
    rec = flip_inner(fatgraph.two_holed_torus(), 4)[1]
    nb = rec.detail["neighbours"]
    assert len(set(nb.values())) == 4
    new = rec.after
    assert new.shear[nb["a"]] == pytest.approx(LOG2)
    assert new.shear[nb["b"]] == pytest.approx(-LOG2)
    assert new.shear[nb["c"]] == pytest.approx(LOG2)
    assert new.shear[nb["d"]] == pytest.approx(-LOG2)
    assert new.shear[4] == 0
    assert flip_inner(sp, 1)[0].shear[1] == 0


def test_inner_flip_twice_restores_shears(rng):
    for name in ("torus-with-hole", "two-orbifold-torus", "two-holed-torus", "theta"):
        sp = _random_shears(fatgraph.LIBRARY[name](), rng)
        for lab in sp.labels:
            if sp.is_pending(lab):
                continue
            try:
                once, _ = flip_inner(sp, lab)
            except MoveError:
                continue
            twice, _ = flip_inner(once, lab)
            assert max(abs(twice.shear[l] - sp.shear[l]) for l in sp.labels) < 1e-12


def test_torus_flip_keeps_perimeter(rng):
    sp = _random_shears(fatgraph.torus_with_hole(), rng)
    for lab in sp.labels:
        new, _ = flip_inner(sp, lab)
        assert sum(new.shear.values()) == pytest.approx(sum(sp.shear.values()), abs=1e-12)


def test_degenerate_coincidences_accumulate():
    # on the torus A = C and B = D
    sp = fatgraph.torus_with_hole({1: 0.3, 2: 0.0, 3: 0.0})
    new, rec = flip_inner(sp, 1)
    nb = rec.detail["neighbours"]
    assert nb["a"] == nb["c"] and nb["b"] == nb["d"]
    assert new.shear[nb["a"]] == pytest.approx(2 * phi(0.3))
    assert new.shear[nb["b"]] == pytest.approx(-2 * phi(-0.3))


def test_flip_errors():
    with pytest.raises(MoveError):
        flip_inner(fatgraph.two_orbifold_torus(), 1)
    with pytest.raises(MoveError):
        flip_inner(fatgraph.pants_dumbbell(), 1)
    with pytest.raises(MoveError):
        flip_pending(fatgraph.torus_with_hole(), 1)
    with pytest.raises(MoveError):
        invert_spiral(fatgraph.torus_with_hole(), 1)


def test_pending_shift_examples():
    assert pending_shifts(0.0, 3) == pytest.approx((-LOG3, LOG3))
    assert pending_shifts(0.0, 2) == pytest.approx((-LOG2, LOG2))
    assert pending_shifts(1.0, 6)[1] == pytest.approx(math.log(1 + math.sqrt(3) * math.e + math.e ** 2))


def test_pending_flip_twice_restores(rng):
    for p in (2, 3, 5):
        sp = _random_shears(fatgraph.two_orbifold_torus(p, p), rng)
        twice, _ = flip_pending(flip_pending(sp, 1)[0], 1)
        assert max(abs(twice.shear[l] - sp.shear[l]) for l in sp.labels) < 1e-12


def test_pending_flip_via_hole_agrees(rng):
    for p in range(2, 9):
        for _ in range(10):
            sp = _random_shears(fatgraph.orbifold_loop(p), rng, 1.5)
            a, _ = flip_pending(sp, 3)
            b, rec = pending_flip_via_hole(sp, 3)
            assert max(abs(a.shear[l] - b.shear[l]) for l in sp.labels) < 1e-12
            assert rec.detail["max_imag"] < 1e-12
    P = 2j * math.pi / 2
    assert abs(cmath.exp(P / 2) + cmath.exp(-P / 2)) < 1e-15


def test_spiral_inversion_examples():
    sp = fatgraph.pants_dumbbell({1: 2.0, 2: 1.0})
    new, _ = invert_spiral(sp, 1)
    assert (new.shear[2], new.shear[1]) == (3.0, -2.0)
    back, _ = invert_spiral(new, 1)
    assert (back.shear[2], back.shear[1]) == (1.0, 2.0)
    zero = fatgraph.pants_dumbbell({1: 0.0, 2: 0.7})
    assert invert_spiral(zero, 1)[0].shear == zero.shear


def test_spiral_matrix_identity(rng):
    for _ in range(20):
        Y, P = rng.gauss(0, 1), rng.gauss(0, 1)
        lhs = x_matrix(Y) @ L_MAT @ x_matrix(P) @ L_MAT @ x_matrix(Y)
        rhs = x_matrix(Y + P) @ L_MAT @ x_matrix(-P) @ L_MAT @ x_matrix(Y + P)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_untouched_word_is_unchanged():
    sp = fatgraph.two_holed_torus()
    _, rec = flip_inner(sp, 4)
    word = PathWord((6, "L"), start=None)
    # the loop around the second hole never meets edge 4 or its corners' vertices
    walk = word_to_walk(sp, word)
    assert transport_walk(walk, rec) == walk


def test_path_through_flipped_edge_keeps_trace(rng):
    sp = _random_shears(fatgraph.torus_with_hole(), rng)
    _, rec = flip_inner(sp, 1)
    word = PathWord((1, "R", 2, "L"))
    new_word = transport_path(word, rec)
    from orbicluster.geodesics import geodesic_function
    assert geodesic_function(new_word, rec.after)["G"] == pytest.approx(geodesic_function(word, sp)["G"], rel=1e-9)


def test_pending_transport_windings():
    sp = fatgraph.two_orbifold_torus()
    _, rec = flip_pending(sp, 1)
    y1, y2 = rec.detail["Y1"], rec.detail["Y2"]
    assert {y1, y2} == {5, 6}
    for k in (1, 2):
        walk = _passage_walk(sp, k)
        out = transport_walk(walk, rec)
        assert walk_trace(rec.after, out) == pytest.approx(walk_trace(sp, walk), rel=1e-9)


def _passage_walk(sp, k):
    rng = random.Random(k)
    while True:
        walk = random_closed_walk(sp, rng, 8)
        if any(d == 10 and kk == k for d, kk in walk):
            return walk


@pytest.mark.parametrize("name", ["torus-with-hole", "two-orbifold-torus", "orbifold-loop", "pants-dumbbell"])
def test_moves_preserve_geodesic_functions(name):
    rng = random.Random(hash(name) % 1000)
    sp = _random_shears(fatgraph.LIBRARY[name](), rng)
    walks = [random_closed_walk(sp, rng, rng.randint(2, 12)) for _ in range(20)]
    for lab in sp.labels:
        a, b = sp.edges[lab]
        if sp.is_pending(lab):
            kinds = ["pending", "pending_via_hole"]
        elif sp.vertex_of[a] == sp.vertex_of[b]:
            kinds = ["spiral"]
        else:
            kinds = ["inner"]
        for kind in kinds:
            rep = check_move_invariance(sp, walks, kind, lab)
            assert rep["ok"], (kind, lab, rep["max_rel_err"], rep["poisson"])


def test_symbolic_invariance_small(rng):
    sp = _random_shears(fatgraph.two_orbifold_torus(), rng)
    walks = [random_closed_walk(sp, rng, 5) for _ in range(3)]
    rep = check_move_invariance(sp, walks, "pending", 2, symbolic=True)
    assert rep["ok"]
    assert all(w["symbolic"]["ok"] for w in rep["words"])


def test_poisson_compatibility_on_random_spines():
    rng = random.Random(2)
    for _ in range(40):
        t = rng.choice([2, 4, 6])
        sp = fatgraph.random_spine(rng, t, rng.choice([0, 2]))
        for lab in sp.labels:
            kind = "pending" if sp.is_pending(lab) else "inner"
            try:
                _, rec = apply_move(sp, kind, lab)
            except MoveError:
                continue
            rep = poisson_compatibility(rec)
            assert rep["ok"], rep
            assert rep["poisson_map_error"] < 1e-6


def test_record_inverse_restores(rng):
    sp = _random_shears(fatgraph.two_orbifold_torus(), rng)
    for kind, lab in (("inner", 3), ("pending", 1)):
        _, rec = apply_move(sp, kind, lab)
        back, _ = rec.inverse()
        assert max(abs(back.shear[l] - sp.shear[l]) for l in sp.labels) < 1e-12
        assert rec.to_json()["kind"] == kind
