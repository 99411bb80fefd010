"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the live output) or directly with
``python3 tests/test_acceptance.py``.
"""

import math
import random
import sys
import time

import pytest

from orbicluster import cluster, fatgraph, geodesics, lambda_lengths, mcg
from orbicluster.cli import invariance_suite

SEED = 0


def report(number, ok, summary, capsys=None):
    line = f"[criterion {number:>2}] {'PASS' if ok else 'FAIL'}: {summary}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def _cycle(kind, limit):
    rep, dt = _timed(cluster.rank2_cycle_check, kind)
    names = ", ".join(c["name"] for c in rep["intermediates"] if c["match"])
    ok = rep["ok"] and dt < limit
    return ok, f"{kind} period {rep['period']}, returns {rep['returns_to_initial']}, matched [{names}], {dt:.2f}s (< {limit}s)"


def criterion_1():
    return _cycle("B2", 1.0)


def criterion_2():
    return _cycle("G2", 5.0)


def criterion_3():
    return _cycle("A2", 1.0)


def criterion_4():
    rep, dt = _timed(lambda: cluster.laurent_sweep(random.Random(SEED), samples=200, max_length=10,
                                                   max_rank=4, orders=(4, 5)))
    ok = rep["inexact_divisions"] == 0 and dt < 60
    return ok, (f"200 sequences, {rep['inexact_divisions']} inexact divisions, {rep['divisions']} of "
                f"{rep['requested']} exchanges done, {rep['truncated']} sequences cut at the "
                f"{rep['term_budget']:,}-term budget, {dt:.1f}s (< 60s)")


def criterion_5():
    parts, ok = [], True
    for p in (3, 4, 5, 6):
        rep = cluster.positivity_search(cluster.geometric_rank2_seed(p), 8, [p])
        ok &= rep["all_positive_real"]
        parts.append(f"p={p}: {rep['variables']} vars, positive={rep['all_positive_real']}, "
                     f"integer cone={rep['all_in_integer_cone']}, counterexamples={len(rep['counterexamples'])}")
    return ok, "; ".join(parts)


def criterion_6():
    rng = random.Random(SEED)
    worst = 0.0
    for p in range(2, 9):
        worst = max(worst, max(r["residual"] for r in lambda_lengths.cc_prime_sweep(p, 100, rng)))
    return worst < 1e-9, f"p=2..8 x 100 samples, max relative residual {worst:.2e} (< 1e-9)"


def criterion_7():
    rng = random.Random(SEED)
    worst, exact = 0.0, True
    for p in range(2, 9):
        for _ in range(100):
            phi = rng.uniform(0.0, 2 * math.pi / p)
            if phi > 0:
                worst = max(worst, geodesics.verify_pgon_identities(p, phi)["max_residual"])
        exact &= geodesics.exact_rotation_power_check(p)
    return worst < 1e-9 and exact, (f"p=2..8 x 100 angles, max entrywise residual {worst:.2e} (< 1e-9); "
                                    f"F_p^p = (-1)^(p-1) E exact for all p: {exact}")


def criterion_8():
    rng = random.Random(SEED)
    parts, ok = [], True
    # the spiral move needs a loop-with-stem hole, which needs s >= 2
    for name in ("torus-with-hole", "two-orbifold-torus", "pants-dumbbell", "orbifold-loop"):
        sp = fatgraph.LIBRARY[name]()
        sp = sp.with_shears({lab: rng.gauss(0.0, 1.0) for lab in sp.labels})
        suite = invariance_suite(sp, name, rng, 20, 1e-9)
        moves = [m for m in suite["moves"] if "skipped" not in m]
        worst = max(m["max_rel_err"] for m in moves)
        agree = max((m["agreement_with_pending_flip"] for m in moves if "agreement_with_pending_flip" in m),
                    default=None)
        kinds = sorted({m["kind"] for m in moves})
        ok &= suite["ok"]
        txt = f"{name}: {len(moves)} moves {kinds}, max rel err {worst:.1e}"
        if agree is not None:
            txt += f", via-hole gap {agree:.1e}"
        parts.append(txt)
    return ok, "; ".join(parts)


def criterion_9():
    rng = random.Random(SEED)
    ok = True
    n_flips = n_mut = 0
    worst_map = 0.0
    for _ in range(10):
        t = rng.choice([2, 4, 6])
        sp = fatgraph.random_spine(rng, t, rng.choice([0, 2]) if t > 2 else 0)
        rep = fatgraph.poisson_report(sp)
        ok &= fatgraph.validate(sp)["valid"] and rep["ok"]
        for lab in sp.labels:
            kind = "pending" if sp.is_pending(lab) else "inner"
            try:
                _, rec = mcg.apply_move(sp, kind, lab)
            except mcg.MoveError:
                continue
            comp = mcg.poisson_compatibility(rec)
            ok &= comp["ok"]
            n_flips += 1
            n_mut += comp["matches_mutation"] is True
            worst_map = max(worst_map, comp["poisson_map_error"])
    return ok, (f"10 random spines skew with kernel = span of boundary vectors (dim s); {n_flips} flips: "
                f"{n_mut} equal to matrix mutation, rest self-folded or one-sided bigon; "
                f"all Poisson maps (max |J B J^T - B'| {worst_map:.1e})")


def criterion_10():
    parts, ok = [], True
    for name in sorted(fatgraph.LIBRARY):
        sp = fatgraph.LIBRARY[name]()
        g, s, r = sp.surface
        E = len(sp.edges)
        good = E == fatgraph.expected_edge_count(g, s, r) and fatgraph.validate(sp)["valid"]
        ok &= good
        parts.append(f"{name} (g={g},s={s},r={r}) E={E}")
    ok &= len(fatgraph.two_orbifold_torus().edges) == 7
    return ok, "; ".join(parts)


def criterion_11():
    rng = random.Random(SEED)
    names = ("torus-with-hole", "two-orbifold-torus", "theta", "two-holed-torus", "orbifold-loop")
    worst_G, shape_ok, n = math.inf, True, 1000
    for i in range(n):
        sp = fatgraph.LIBRARY[names[i % len(names)]]()
        sp = sp.with_shears({lab: rng.gauss(0.0, 2.0) for lab in sp.labels})
        walk = geodesics.random_closed_walk(sp, rng, rng.randint(1, 10), rotations=False)
        worst_G = min(worst_G, geodesics.walk_trace(sp, walk))
        rep = geodesics.trace_shape_report(sp, walk)
        shape_ok &= rep["positive_integer"] and rep["has_extremes"]
    ok = worst_G >= 2 - 1e-9 and shape_ok
    return ok, (f"{n} rotation-free words, min trace {worst_G:.9f} (>= 2); positive integer coefficients "
                f"with e^(+-sum Z/2) present: {shape_ok}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, capsys):
    ok, summary = CRITERIA[number - 1]()
    report(number, ok, summary, capsys)
    assert ok, summary


if __name__ == "__main__":
    results = [report(i + 1, *fn()) for i, fn in enumerate(CRITERIA)]
    sys.exit(0 if all(results) else 1)
