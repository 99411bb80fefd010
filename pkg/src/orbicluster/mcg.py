"""Moves on spines: Whitehead flips of inner edges, flips of pending edges
and inversion of a spiralling hole, with transport of closed paths."""

from __future__ import annotations

import cmath
import math
import random

import numpy as np
from dataclasses import dataclass, field
from typing import Sequence

from .cluster import ExchangeMatrix, matrix_mutate
from .fatgraph import Spine, matrix_rank, poisson_center, poisson_matrix
from .geodesics import (PathWord, Walk, check_walk, symbolic_trace, walk_to_word,
                        walk_trace, word_to_walk)

SYMBOLIC_TERM_BUDGET = 10_000


class MoveError(ValueError):
    pass


def phi(z: float) -> float:
    """log(1 + e^z), stable for large |z|."""
    return max(z, 0.0) + math.log1p(math.exp(-abs(z)))


def pending_shifts(z: float, p: int) -> tuple[float, float]:
    """(shift of Y1, shift of Y2) for a pending flip at shear z."""
    w = 2.0 * math.cos(math.pi / p)
    return -math.log(1 + w * math.exp(-z) + math.exp(-2 * z)), math.log(1 + w * math.exp(z) + math.exp(2 * z))


@dataclass
class MoveRecord:
    kind: str
    target: int
    shear_update: dict[int, tuple[float, float]]
    substitutions: list[str]
    before: Spine = field(repr=False)
    after: Spine = field(repr=False)
    detail: dict = field(default_factory=dict)

    def inverse(self) -> tuple[Spine, "MoveRecord"]:
        """Apply the inverse move to the post-move spine."""
        return MOVES[self.kind](self.after, self.target)

    def to_json(self) -> dict:
        return {"kind": self.kind, "target": self.target,
                "shear_update": {str(k): list(v) for k, v in sorted(self.shear_update.items())},
                "substitutions": self.substitutions, "detail": self.detail}


def _rebuild(spine: Spine, sigma: dict, shear: dict) -> Spine:
    return Spine(sigma, dict(spine.edges), shear, dict(spine.orders), spine.surface, dict(spine.names))


def _update_record(old: Spine, new: Spine) -> dict:
    return {lab: (old.shear[lab], new.shear[lab]) for lab in old.labels if old.shear[lab] != new.shear[lab]}


# ---------------------------------------------------------------------------
# inner flip

def flip_inner(spine: Spine, label: int) -> tuple[Spine, MoveRecord]:
    if label not in spine.edges:
        raise MoveError(f"no edge {label}")
    if spine.is_pending(label):
        raise MoveError(f"edge {label} is pending; use flip_pending")
    hu, hv = spine.edges[label]
    if spine.vertex_of[hu] == spine.vertex_of[hv]:
        raise MoveError(f"edge {label} is a loop")
    sg = spine.sigma
    a, c = sg[hu], sg[hv]
    b, d = sg[a], sg[c]
    if sg[b] != hu or sg[d] != hv:
        raise MoveError(f"edge {label} does not join two trivalent vertices")
    Z = spine.shear[label]
    shear = dict(spine.shear)
    # coincident neighbours accumulate, which covers every degenerate case
    for h, delta in ((a, phi(Z)), (b, -phi(-Z)), (c, phi(Z)), (d, -phi(-Z))):
        shear[spine.edge_of[h]] += delta
    shear[label] = -Z
    sigma = dict(sg)
    sigma.update({hu: b, b: c, c: hu, hv: d, d: a, a: hv})
    new = _rebuild(spine, sigma, shear)
    names = {k: spine.edge_of[h] for k, h in zip("abcd", (a, b, c, d))}
    rec = MoveRecord("inner", label, _update_record(spine, new),
                     [f"paths through corners {names} rerouted across the new edge {label}"],
                     spine, new, {"neighbours": names, "Z": Z})
    return new, rec


def _transport_inner(walk: Walk, rec: MoveRecord) -> Walk:
    old, new = rec.before, rec.after
    hu, hv = old.edges[rec.target]
    inner = {hu, hv}
    n = len(walk)
    out = []
    for i, (d, k) in enumerate(walk):
        if d in inner:
            continue
        out.append((d, k))
        x = old.iota[d]
        if old.is_terminal(x) or x in inner or old.vertex_of[x] not in (old.vertex_of[hu], old.vertex_of[hv]):
            continue
        # entering the quadrilateral at x; find where the path leaves it
        j = (i + 1) % n
        if walk[j][0] in inner:
            j = (j + 1) % n
        y = walk[j][0]
        if new.vertex_of[x] != new.vertex_of[y]:
            out.append((hu if new.vertex_of[hu] == new.vertex_of[x] else hv, None))
    return tuple(out)


# ---------------------------------------------------------------------------
# pending flip

def _pending_frame(spine: Spine, label: int):
    if label not in spine.edges:
        raise MoveError(f"no edge {label}")
    if not spine.is_pending(label):
        raise MoveError(f"edge {label} is not pending")
    t = spine.terminal_dart(label)
    z = spine.iota[t]
    if spine.is_terminal(z):
        raise MoveError(f"edge {label} joins two orbifold points")
    y2 = spine.sigma[z]
    y1 = spine.sigma[y2]
    if spine.sigma[y1] != z:
        raise MoveError(f"edge {label} is not attached at a trivalent vertex")
    return t, z, y1, y2


def flip_pending(spine: Spine, label: int) -> tuple[Spine, MoveRecord]:
    t, z, y1, y2 = _pending_frame(spine, label)
    p = spine.orders[t]
    Z = spine.shear[label]
    s1, s2 = pending_shifts(Z, p)
    shear = dict(spine.shear)
    shear[spine.edge_of[y1]] += s1
    shear[spine.edge_of[y2]] += s2
    shear[label] = -Z
    sigma = dict(spine.sigma)
    sigma.update({z: y1, y1: y2, y2: z})
    new = _rebuild(spine, sigma, shear)
    rec = MoveRecord("pending", label, _update_record(spine, new),
                     [f"passages y1->y2 wind once more, y2->y1 once less (mod {p})"],
                     spine, new, {"Y1": spine.edge_of[y1], "Y2": spine.edge_of[y2], "Z": Z, "p": p})
    return new, rec


def _transport_pending(walk: Walk, rec: MoveRecord) -> Walk:
    old = rec.before
    t, z, y1, y2 = _pending_frame(old, rec.target)
    p = old.orders[t]
    n = len(walk)
    out = []
    for i, (d, k) in enumerate(walk):
        if d in (z, t):
            continue
        out.append((d, k))
        x = old.iota[d]
        if x not in (y1, y2):
            continue
        # a passage through the vertex: winding 0 means a direct turn
        nxt, kk = walk[(i + 1) % n]
        if nxt == z:
            y_out = walk[(i + 3) % n][0]
        else:
            kk, y_out = 0, nxt
        if x == y1 and y_out == y2:
            kk += 1
        elif x == y2 and y_out == y1:
            kk -= 1
        kk %= p
        if kk:
            out.extend([(z, kk), (t, None)])
    return tuple(out)


# ---------------------------------------------------------------------------
# pending flip realized through an auxiliary hole

def pending_flip_via_hole(spine: Spine, label: int) -> tuple[Spine, MoveRecord]:
    """Same update as flip_pending, composed from ordinary flips with complex shears.

    The pending edge is replaced by a stem S = Z - P/2 leading to a loop of
    perimeter P, e^(P/2) + e^(-P/2) = w.  Flipping the stem and then the loop
    edge brings the configuration back with the stem on the other side.
    """
    t, z, y1, y2 = _pending_frame(spine, label)
    p = spine.orders[t]
    P = 2j * math.pi / p
    Z = spine.shear[label]
    S = Z - P / 2
    cphi = lambda x: cmath.log(1 + cmath.exp(x))
    # first flip on the stem: Y2 sits at the +phi corner, Y1 at the -phi corner
    y2_shift = cphi(S)
    y1_shift = -cphi(-S)
    # the loop edge is now inner with shear P + (phi(S) - phi(-S)) = P + S
    L1 = P + S
    y2_shift += cphi(L1)
    y1_shift -= cphi(-L1)
    # the old stem now closes the loop (shear P); the new stem carries -L1
    newZ = -L1 + P / 2
    vals = {"Y1": y1_shift, "Y2": y2_shift, "Z": newZ}
    imag = max(abs(v.imag) for v in vals.values())
    shear = dict(spine.shear)
    shear[spine.edge_of[y1]] += y1_shift.real
    shear[spine.edge_of[y2]] += y2_shift.real
    shear[label] = newZ.real
    sigma = dict(spine.sigma)
    sigma.update({z: y1, y1: y2, y2: z})
    new = _rebuild(spine, sigma, shear)
    rec = MoveRecord("pending_via_hole", label, _update_record(spine, new),
                     ["two ordinary flips on the stem and the auxiliary loop"], spine, new,
                     {"P": [P.real, P.imag], "max_imag": imag, "Y1": spine.edge_of[y1],
                      "Y2": spine.edge_of[y2], "p": p})
    return new, rec


# ---------------------------------------------------------------------------
# spiral inversion

def loop_with_stem(spine: Spine, hole: int) -> tuple[int, int]:
    """(loop label, stem label) for a loop edge whose monogon face is the hole.

    ``hole`` may be given as the loop's edge label.
    """
    if hole not in spine.edges:
        raise MoveError(f"no edge {hole}")
    a, b = spine.edges[hole]
    if spine.is_terminal(a) or spine.vertex_of[a] != spine.vertex_of[b]:
        raise MoveError(f"edge {hole} is not a loop bounding a hole")
    cyc = spine.vertices()[spine.vertex_of[a]]
    if len(cyc) != 3:
        raise MoveError("loop must sit at a trivalent vertex")
    stem_dart = next(h for h in cyc if h not in (a, b))
    stem = spine.edge_of[stem_dart]
    if stem == hole:
        raise MoveError("loop has no stem")
    return hole, stem


def invert_spiral(spine: Spine, hole: int) -> tuple[Spine, MoveRecord]:
    loop, stem = loop_with_stem(spine, hole)
    P, Y = spine.shear[loop], spine.shear[stem]
    shear = dict(spine.shear)
    shear[stem] = Y + P
    shear[loop] = -P
    new = spine.copy(shear)
    rec = MoveRecord("spiral", loop, _update_record(spine, new), ["words unchanged"],
                     spine, new, {"stem": stem, "P": P, "Y": Y})
    return new, rec


MOVES = {"inner": flip_inner, "pending": flip_pending,
         "pending_via_hole": pending_flip_via_hole, "spiral": invert_spiral}


def apply_move(spine: Spine, kind: str, target: int) -> tuple[Spine, MoveRecord]:
    if kind not in MOVES:
        raise MoveError(f"unknown move kind {kind!r}")
    return MOVES[kind](spine, int(target))


# ---------------------------------------------------------------------------
# transport and invariance

def transport_walk(walk: Walk, rec: MoveRecord) -> Walk:
    check_walk(rec.before, walk)
    if rec.kind == "inner":
        out = _transport_inner(walk, rec)
    elif rec.kind in ("pending", "pending_via_hole"):
        out = _transport_pending(walk, rec)
    else:
        out = walk
    check_walk(rec.after, out)
    return out


def transport_path(word: PathWord, rec: MoveRecord) -> PathWord:
    walk = word_to_walk(rec.before, word)
    return walk_to_word(rec.after, transport_walk(walk, rec))


def poisson_compatibility(rec: MoveRecord) -> dict:
    """Compare the bracket after the move with matrix mutation of the bracket before.

    Rows are scaled by 2 on pending edges, which makes the bracket a
    skew-symmetrizable exchange matrix in the sense of cluster mutation.
    """
    old, new = rec.before, rec.after
    labels = old.labels
    dvec = tuple(2 if old.is_pending(lab) else 1 for lab in labels)
    scale = lambda B: tuple(tuple(dvec[i] * x for x in row) for i, row in enumerate(B))
    Bold, Bnew = scale(poisson_matrix(old)), scale(poisson_matrix(new))
    applicable = True
    if rec.kind == "spiral":
        expected = Bold
    else:
        expected = matrix_mutate(ExchangeMatrix(Bold, dvec), labels.index(rec.target)).B
        if rec.kind == "inner":
            nb = rec.detail["neighbours"]
            # a loop in the quadrilateral is self-folded; a single bigon side
            # cancels a 2-cycle at the flipped edge.  Either way the constant
            # bracket no longer carries what mutation needs.
            applicable = (nb["a"] != nb["b"] and nb["c"] != nb["d"]
                          and (nb["a"] == nb["d"]) == (nb["b"] == nb["c"]))
    centers_old, centers_new = poisson_center(old), poisson_center(new)
    n = len(labels)
    kernel_old = n - matrix_rank([list(r) for r in Bold])
    kernel_new = n - matrix_rank([list(r) for r in Bnew])
    matches = Bnew == expected if applicable else None
    pmap = poisson_map_error(rec)
    ok = (matches is not False and pmap < 1e-6
          and kernel_old == kernel_new == len(centers_old) == len(centers_new))
    return {"ok": ok, "applicable": applicable, "matches_mutation": matches,
            "poisson_map_error": pmap, "kernel_before": kernel_old,
            "kernel_after": kernel_new, "s": len(centers_old)}


def poisson_map_error(rec: MoveRecord, h: float = 1e-6) -> float:
    """max |J B J^T - B'| for the Jacobian J of the shear update, by central differences."""
    old, new = rec.before, rec.after
    labels = old.labels
    n = len(labels)
    J = np.zeros((n, n))
    for j, lab in enumerate(labels):
        plus = MOVES[rec.kind](old.with_shears({lab: old.shear[lab] + h}), rec.target)[0]
        minus = MOVES[rec.kind](old.with_shears({lab: old.shear[lab] - h}), rec.target)[0]
        J[:, j] = [(plus.shear[m] - minus.shear[m]) / (2 * h) for m in labels]
    Bo = np.array(poisson_matrix(old), dtype=float)
    Bn = np.array(poisson_matrix(new), dtype=float)
    return float(np.max(np.abs(J @ Bo @ J.T - Bn))) if n else 0.0


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), 1e-300)


def check_move_invariance(spine: Spine, walks: Sequence[Walk], kind: str, target: int,
                          tol: float = 1e-9, symbolic: bool = False, rng: random.Random | None = None) -> dict:
    """Trace of every walk before the move against its transported trace after."""
    new, rec = apply_move(spine, kind, target)
    rng = rng or random.Random(0)
    rows = []
    worst = 0.0
    for walk in walks:
        out = transport_walk(walk, rec)
        g0, g1 = walk_trace(spine, walk), walk_trace(new, out)
        err = _rel(g0, g1)
        worst = max(worst, err)
        row = {"word": walk_to_word(spine, walk).text(), "after": walk_to_word(new, out).text(),
               "G_before": g0, "G_after": g1, "rel_err": err, "ok": err < tol}
        if symbolic:
            row["symbolic"] = _symbolic_compare(spine, walk, new, out, rec, rng, tol)
            row["ok"] = row["ok"] and row["symbolic"]["ok"]
        rows.append(row)
    poisson = poisson_compatibility(rec)
    inv_spine, _ = rec.inverse()
    restore = max(abs(inv_spine.shear[l] - spine.shear[l]) for l in spine.labels)
    ok = all(r["ok"] for r in rows) and poisson["ok"] and restore < 1e-12
    return {"kind": kind, "target": target, "ok": ok, "max_rel_err": worst, "words": rows,
            "poisson": poisson, "involution_error": restore, "record": rec.to_json()}


def _symbolic_compare(old, walk, new, out, rec, rng, tol):
    """Symbolic traces on both sides, compared at random shears related by the move.

    The two traces live in different variables, related by a non-polynomial
    change of coordinates, so equality is checked by evaluating the expanded
    polynomials at shears pushed through the move.
    """
    t0 = symbolic_trace(old, walk)
    t1 = symbolic_trace(new, out)
    if len(t0.terms) > SYMBOLIC_TERM_BUDGET or len(t1.terms) > SYMBOLIC_TERM_BUDGET:
        return {"ok": True, "skipped": "term budget"}
    worst = 0.0
    for _ in range(25):
        sh = {lab: rng.uniform(-1.5, 1.5) for lab in old.labels}
        s0 = old.copy(sh)
        s1, _ = apply_move(s0, rec.kind, rec.target)
        v0 = t0.evaluate({f"l{lab}": math.exp(sh[lab] / 2) for lab in old.labels})
        v1 = t1.evaluate({f"l{lab}": math.exp(s1.shear[lab] / 2) for lab in old.labels})
        worst = max(worst, _rel(complex(v0).real, complex(v1).real))
    return {"ok": worst < tol, "terms": [len(t0.terms), len(t1.terms)], "max_rel_err": worst}
