"""Matrix words along closed paths on a spine and their traces.

A path is stored internally as a *walk*: a cyclic list of steps
``(dart, k)``.  ``dart`` is the half-edge the path leaves along; ``k`` is
the winding number used when the path reaches a pending terminal at the
far end of that dart (None otherwise).  At a trivalent vertex the next dart
is sigma(iota(d)) for a right turn or sigma^2(iota(d)) for a left turn.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fatgraph import Spine
from .laurent import LaurentPoly, positivity_report
from .ring import CyclotomicField, omega

Step = tuple[int, "int | None"]
Walk = tuple[Step, ...]

R_MAT = np.array([[1.0, 1.0], [-1.0, 0.0]])
L_MAT = np.array([[0.0, 1.0], [-1.0, -1.0]])
PARABOLIC_TOL = 1e-9


class WordError(ValueError):
    """A word that cannot be realized on the spine."""


# ---------------------------------------------------------------------------
# generators

def x_matrix(z: float) -> np.ndarray:
    e = math.exp(z / 2.0)
    return np.array([[0.0, -e], [1.0 / e, 0.0]])


def f_matrix(p: int) -> np.ndarray:
    w = 0.0 if p == 2 else 2.0 * math.cos(math.pi / p)
    return np.array([[0.0, 1.0], [-1.0, -w]])


def rotation_matrix(p: int, k: int) -> np.ndarray:
    """(-1)^(k+1) F_p^k."""
    if not 1 <= k <= p - 1:
        raise WordError(f"winding {k} outside 1..{p - 1}")
    return (-1) ** (k + 1) * np.linalg.matrix_power(f_matrix(p), k)


def generator(token, mode: str = "numeric", spine: Spine | None = None, field=None):
    """Matrix of a single token: an edge label, "L", "R" or a Rotate dict."""
    if mode == "numeric":
        if token == "R":
            return R_MAT.copy()
        if token == "L":
            return L_MAT.copy()
        if isinstance(token, dict):
            p = token.get("p") or spine.order(token["rotate"])
            return rotation_matrix(p, token["k"])
        return x_matrix(spine.shear[int(token)])
    sym = SymbolicContext(spine, field)
    if token == "R":
        return sym.R
    if token == "L":
        return sym.L
    if isinstance(token, dict):
        p = token.get("p") or spine.order(token["rotate"])
        return sym.rotation(p, token["k"])
    return sym.X(int(token))


class SymbolicContext:
    """Generator matrices with Laurent-polynomial entries in l<label> = e^(Z/2)."""

    def __init__(self, spine: Spine, field: CyclotomicField | None = None):
        self.spine = spine
        self.vars = tuple(f"l{label}" for label in spine.labels)
        self.field = field or CyclotomicField.for_orders(spine.orbifold_orders())
        c = lambda v: LaurentPoly.constant(v, self.vars, self.field)
        self.zero, self.one = c(0), c(1)
        self.R = (c(1), c(1), c(-1), c(0))
        self.L = (c(0), c(1), c(-1), c(-1))
        self._rot = {}

    def X(self, label: int):
        lam = LaurentPoly.variable(f"l{label}", self.vars, self.field)
        return (self.zero, -lam, lam ** -1, self.zero)

    def rotation(self, p: int, k: int):
        if not 1 <= k <= p - 1:
            raise WordError(f"winding {k} outside 1..{p - 1}")
        key = (p, k)
        if key not in self._rot:
            w = LaurentPoly.constant(omega(p, self.field), self.vars, self.field)
            F = (self.zero, self.one, -self.one, -w)
            M = F
            for _ in range(k - 1):
                M = mat_mul(M, F)
            sign = 1 if k % 2 == 1 else -1
            self._rot[key] = tuple(sign * e for e in M)
        return self._rot[key]


def mat_mul(a, b):
    return (a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])


def exact_rotation_power_check(p: int) -> bool:
    """F_p^p == (-1)^(p-1) E in the cyclotomic field."""
    fld = CyclotomicField.for_orders([p])
    w = omega(p, fld)
    F = (fld(0), fld(1), fld(-1), -w)
    M = F
    for _ in range(p - 1):
        M = (M[0] * F[0] + M[1] * F[2], M[0] * F[1] + M[1] * F[3],
             M[2] * F[0] + M[3] * F[2], M[2] * F[1] + M[3] * F[3])
    s = (-1) ** (p - 1)
    return M[0] == s and M[3] == s and M[1] == 0 and M[2] == 0


# ---------------------------------------------------------------------------
# words and walks

@dataclass(frozen=True)
class PathWord:
    """Tokens alternate an edge label with "L", "R" or {"rotate": label, "k": k}.

    ``start`` optionally pins the dart along which the first edge is left,
    which matters when parallel edges make the tokens ambiguous.
    """

    tokens: tuple
    closed: bool = True
    start: int | None = None

    def to_json(self) -> dict:
        out = {"tokens": [dict(t) if isinstance(t, dict) else t for t in self.tokens],
               "closed": self.closed}
        if self.start is not None:
            out["start"] = self.start
        return out

    @classmethod
    def from_json(cls, data) -> "PathWord":
        if isinstance(data, list):
            data = {"tokens": data}
        toks = []
        for t in data["tokens"]:
            if isinstance(t, dict):
                toks.append({"rotate": int(t["rotate"]), "k": int(t["k"])})
            elif t in ("L", "R"):
                toks.append(t)
            else:
                toks.append(int(t))
        return cls(tuple(_freeze(t) for t in toks), bool(data.get("closed", True)), data.get("start"))

    def text(self) -> str:
        parts = []
        for t in self.tokens:
            if isinstance(t, dict) or isinstance(t, _Rot):
                parts.append(f"F{t['rotate']}^{t['k']}")
            else:
                parts.append(str(t))
        return " ".join(parts)


class _Rot(dict):
    """Hashable rotation token."""

    def __hash__(self):
        return hash((self["rotate"], self["k"]))


def _freeze(t):
    return _Rot(t) if isinstance(t, dict) else t


def turn_of(spine: Spine, arrival: int, departure: int) -> str:
    if spine.sigma[arrival] == departure:
        return "R"
    if spine.sigma[spine.sigma[arrival]] == departure:
        return "L"
    raise WordError(f"darts {arrival} and {departure} are not consecutive at a vertex")


def check_walk(spine: Spine, walk: Walk):
    n = len(walk)
    if n == 0:
        raise WordError("empty walk")
    for i, (d, k) in enumerate(walk):
        nxt = walk[(i + 1) % n][0]
        arr = spine.iota[d]
        if spine.is_terminal(arr):
            p = spine.orders[arr]
            if nxt != arr or k is None or not 1 <= k <= p - 1:
                raise WordError(f"bad turn-around at terminal dart {arr}")
        else:
            if k is not None:
                raise WordError(f"winding given away from a terminal at step {i}")
            if nxt not in (spine.sigma[arr], spine.sigma[spine.sigma[arr]]):
                raise WordError(f"step {i}: dart {nxt} does not continue dart {d}")


def walk_to_word(spine: Spine, walk: Walk) -> PathWord:
    check_walk(spine, walk)
    toks = []
    n = len(walk)
    for i, (d, k) in enumerate(walk):
        toks.append(spine.edge_of[d])
        arr = spine.iota[d]
        if spine.is_terminal(arr):
            toks.append(_Rot({"rotate": spine.edge_of[d], "k": k}))
        else:
            toks.append(turn_of(spine, arr, walk[(i + 1) % n][0]))
    return PathWord(tuple(toks), True, walk[0][0])


def word_to_walk(spine: Spine, word: PathWord) -> Walk:
    """Realize a closed word; the first consistent starting dart wins."""
    toks = list(word.tokens)
    if not word.closed:
        raise WordError("only closed words are realized as walks")
    if len(toks) % 2 or not toks:
        raise WordError("closed words alternate edges and connectors")
    edges = toks[0::2]
    conns = toks[1::2]
    for e in edges:
        if isinstance(e, dict) or e in ("L", "R") or int(e) not in spine.edges:
            raise WordError(f"expected an edge label, got {e!r}")
    first = spine.edges[int(edges[0])]
    starts = [word.start] if word.start is not None else sorted(first)
    for s in starts:
        if s not in first:
            raise WordError(f"start dart {s} does not belong to edge {edges[0]}")
        walk = _try_realize(spine, edges, conns, s)
        if walk is not None:
            return walk
    raise WordError(f"word {word.text()} is not realizable on this spine")


def _try_realize(spine, edges, conns, start):
    steps = []
    d = start
    n = len(edges)
    for i in range(n):
        if spine.edge_of[d] != int(edges[i]):
            return None
        arr = spine.iota[d]
        c = conns[i]
        nxt_edge = int(edges[(i + 1) % n])
        if isinstance(c, dict):
            if not spine.is_terminal(arr) or int(c["rotate"]) != spine.edge_of[d]:
                return None
            p = spine.orders[arr]
            k = int(c["k"]) % p
            if k == 0:
                return None
            steps.append((d, k))
            d = arr
        else:
            if spine.is_terminal(arr):
                return None
            nd = spine.sigma[arr] if c == "R" else spine.sigma[spine.sigma[arr]]
            steps.append((d, None))
            d = nd
        if spine.edge_of[d] != nxt_edge:
            return None
    if d != start:
        return None
    return tuple(steps)


def normalize_word(spine: Spine, word: PathWord) -> tuple[PathWord, int]:
    """Reduce windings into 1..p-1 and drop full windings.

    Returns the reduced word and the sign picked up on the way: winding k+p
    is minus winding k, and a full winding between two turns t collapses to
    the turn 2t (L L -> R, R R -> -L).
    """
    toks = list(word.tokens)
    sign = 1
    while True:
        n = len(toks)
        hit = None
        for i in range(1, n, 2):
            t = toks[i]
            if not isinstance(t, dict):
                continue
            p = spine.order(int(t["rotate"]))
            k = int(t["k"])
            m, r = divmod(k, p)
            if r:
                sign *= (-1) ** m
                toks[i] = _Rot({"rotate": t["rotate"], "k": r})
            else:
                sign *= (-1) ** (m - 1)
                hit = i
                break
        if hit is None:
            break
        if n < 6:
            raise WordError("word reduces to a bare excursion around an orbifold point")
        i_in, i_out = (hit - 2) % n, (hit + 2) % n
        c_in, c_out = toks[i_in], toks[i_out]
        if c_in != c_out or isinstance(c_in, dict):
            raise WordError("full winding between mismatched turns backtracks")
        if c_in == "R":
            sign = -sign
        drop = {(hit - 1) % n, hit, (hit + 1) % n, i_out}
        toks[i_in] = "R" if c_in == "L" else "L"
        toks = [t for j, t in enumerate(toks) if j not in drop]
    return PathWord(tuple(toks), word.closed, None), sign


# ---------------------------------------------------------------------------
# evaluation

def walk_matrix(spine: Spine, walk: Walk, shear=None) -> np.ndarray:
    shear = spine.shear if shear is None else shear
    M = np.eye(2)
    n = len(walk)
    for i, (d, k) in enumerate(walk):
        M = M @ x_matrix(shear[spine.edge_of[d]])
        arr = spine.iota[d]
        if k is not None:
            M = M @ rotation_matrix(spine.orders[arr], k)
        else:
            nxt = walk[(i + 1) % n][0]
            M = M @ (R_MAT if spine.sigma[arr] == nxt else L_MAT)
    return M


def walk_matrix_symbolic(spine: Spine, walk: Walk, ctx: SymbolicContext | None = None):
    ctx = ctx or SymbolicContext(spine)
    M = (ctx.one, ctx.zero, ctx.zero, ctx.one)
    n = len(walk)
    for i, (d, k) in enumerate(walk):
        M = mat_mul(M, ctx.X(spine.edge_of[d]))
        arr = spine.iota[d]
        if k is not None:
            M = mat_mul(M, ctx.rotation(spine.orders[arr], k))
        else:
            nxt = walk[(i + 1) % n][0]
            M = mat_mul(M, ctx.R if spine.sigma[arr] == nxt else ctx.L)
    return M


def walk_trace(spine: Spine, walk: Walk, shear=None) -> float:
    return float(np.trace(walk_matrix(spine, walk, shear)))


def evaluate_word(word: PathWord, spine: Spine, mode: str = "numeric"):
    if not word.closed:
        M = np.eye(2) if mode == "numeric" else None
        ctx = SymbolicContext(spine) if mode != "numeric" else None
        if ctx:
            M = (ctx.one, ctx.zero, ctx.zero, ctx.one)
        for t in word.tokens:
            g = generator(t, mode, spine) if mode == "numeric" else _sym_gen(ctx, spine, t)
            M = M @ g if mode == "numeric" else mat_mul(M, g)
        return M
    sign = 1
    if _needs_norm(spine, word):
        word, sign = normalize_word(spine, word)
    walk = word_to_walk(spine, word)
    if mode == "numeric":
        return sign * walk_matrix(spine, walk)
    return tuple(sign * e for e in walk_matrix_symbolic(spine, walk))


def _sym_gen(ctx, spine, t):
    if t == "R":
        return ctx.R
    if t == "L":
        return ctx.L
    if isinstance(t, dict):
        return ctx.rotation(spine.order(int(t["rotate"])), int(t["k"]))
    return ctx.X(int(t))


def _needs_norm(spine, word):
    for t in word.tokens:
        if isinstance(t, dict) and not 1 <= int(t["k"]) <= spine.order(int(t["rotate"])) - 1:
            return True
    return False


def classify(G: float) -> str:
    a = abs(G)
    if abs(a - 2.0) < PARABOLIC_TOL:
        return "parabolic"
    return "hyperbolic" if a > 2.0 else "elliptic"


def geodesic_function(word: PathWord, spine: Spine, mode: str = "numeric") -> dict:
    if not word.closed:
        raise WordError("geodesic functions need a closed word")
    M = evaluate_word(word, spine, mode)
    if mode == "numeric":
        G = float(M[0, 0] + M[1, 1])
        out = {"G": G, "kind": classify(G)}
        out["length"] = 2.0 * math.acosh(abs(G) / 2.0) if abs(G) >= 2.0 else None
        return out
    tr = M[0] + M[3]
    return {"trace": tr, "text": tr.to_text(),
            "positivity": positivity_report(tr, spine.orbifold_orders())}


def symbolic_trace(spine: Spine, walk: Walk, ctx: SymbolicContext | None = None) -> LaurentPoly:
    M = walk_matrix_symbolic(spine, walk, ctx)
    return M[0] + M[3]


# ---------------------------------------------------------------------------
# random closed walks

def _successors(spine: Spine, d: int, rotations: bool):
    arr = spine.iota[d]
    if spine.is_terminal(arr):
        if not rotations:
            return []
        return [(arr, k) for k in range(1, spine.orders[arr])]
    out = []
    for nxt in (spine.sigma[arr], spine.sigma[spine.sigma[arr]]):
        if not rotations and spine.is_terminal(spine.iota[nxt]):
            continue
        out.append((nxt, None))
    return out


def random_closed_walk(spine: Spine, rng: random.Random, length: int = 6,
                       rotations: bool = True, max_tries: int = 200) -> Walk:
    """Random non-backtracking walk of about ``length`` steps, closed by a shortest return.

    Steps only go where the starting dart can still be reached, so dead ends
    (say, a stem leading only to pending edges when rotations are off) are
    never entered.
    """
    succ = {d: _successors(spine, d, rotations) for d in spine.iota if not spine.is_terminal(d)}
    for h in spine.iota:
        if spine.is_terminal(h) and rotations:
            succ[h] = _successors(spine, h, rotations)
    pred: dict[int, list[int]] = {d: [] for d in succ}
    for d, nxt in succ.items():
        for e, _ in nxt:
            pred.setdefault(e, []).append(d)
    darts = sorted(d for d in succ if not spine.is_terminal(d)
                   and (rotations or not spine.is_terminal(spine.iota[d])))
    for _ in range(max_tries):
        start = rng.choice(darts)
        back = _reaching(pred, start)
        if start not in back:
            continue
        steps = []
        d = start
        for _ in range(max(length - 1, 0)):
            options = [(e, k) for e, k in succ[d] if e in back]
            e, k = rng.choice(options)
            steps.append((d, k))
            d = e
        tail = _close(spine, d, start, rng, rotations)
        walk = tuple(steps) + tail
        check_walk(spine, walk)
        return walk
    raise WordError("could not close a random walk")


def _reaching(pred, target):
    """Darts with a nonempty path to target."""
    seen = set()
    queue = deque(pred.get(target, []))
    while queue:
        d = queue.popleft()
        if d in seen:
            continue
        seen.add(d)
        queue.extend(pred.get(d, []))
    return seen


def _close(spine, d, start, rng, rotations):
    """Shortest continuation from departing d back to departing start."""
    prev = {d: None}
    queue = deque([d])
    found = False
    while queue:
        cur = queue.popleft()
        succ = _successors(spine, cur, rotations)
        rng.shuffle(succ)
        for nxt, k in succ:
            if nxt == start:
                prev[("end",)] = (cur, k)
                found = True
                break
            if nxt not in prev:
                prev[nxt] = (cur, k)
                queue.append(nxt)
        if found:
            break
    if not found:
        return None
    chain = []
    node = ("end",)
    while True:
        cur, k = prev[node]
        chain.append((cur, k))
        if cur == d:
            break
        node = cur
    return tuple(reversed(chain))


# ---------------------------------------------------------------------------
# regular p-gon data

def pgon_shear_data(p: int, phi: float) -> dict:
    """Shears of the fan replacing a Z_p point, as functions of the angle phi."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if not 0 < phi < 2 * math.pi / p:
        raise ValueError(f"phi must lie in (0, 2pi/{p})")
    s = math.sin
    pi = math.pi
    Z = math.log(s(pi / p - phi / 2) / s(phi / 2))
    out = {"Z": Z, "Zk": {}, "Yk": {}}
    if p >= 3:
        out["Zk"][1] = Z + math.log(s(2 * pi / p) / s(pi / p))
        out["Zk"][p] = Z + math.log(s(pi / p) / s(2 * pi / p))
        for k in range(2, p):
            out["Zk"][k] = Z + math.log(s((k - 1) * pi / p) / s(k * pi / p))
        for k in range(2, p - 1):
            out["Yk"][k] = math.log(s((k + 1) * pi / p) / s((k - 1) * pi / p))
    return out


def verify_pgon_identities(p: int, phi: float) -> dict:
    """Residuals of the matrix identities trading rotations for turns."""
    data = pgon_shear_data(p, phi)
    X = x_matrix
    Z, Zk, Yk = data["Z"], data["Zk"], data["Yk"]
    F = f_matrix(p)
    res = {}
    if p == 2:
        # Z_1 -> -inf and Z_2 -> +inf with Z_1 + Z_2 = 2Z, so the k = 1 relation
        # degenerates to X_Z F_2 X_Z = X_{2Z}
        res["k=1 (degenerate)"] = _resid(X(Z) @ F @ X(Z), X(2 * Z))
        return {"p": p, "phi": phi, "residuals": res, "max_residual": max(res.values())}
    lhs1 = X(Z) @ F @ X(Z)
    res["k=1"] = _resid(lhs1, X(Zk[1]) @ L_MAT @ X(Zk[2]))
    for k in range(2, p - 1):
        res[f"equivalence k={k}"] = _resid(lhs1, X(Zk[k]) @ L_MAT @ X(Yk[k]) @ L_MAT @ X(Zk[k + 1]))
    res["equivalence last"] = _resid(lhs1, X(Zk[p - 1]) @ L_MAT @ X(Zk[p]))
    for k in range(2, p - 1):
        lhs = X(Z) @ ((-1) ** (k - 1) * np.linalg.matrix_power(F, k)) @ X(Z)
        rhs = X(Zk[1])
        for j in range(2, k + 1):
            rhs = rhs @ R_MAT @ X(Yk[j])
        rhs = rhs @ L_MAT @ X(Zk[k + 1])
        res[f"chain k={k}"] = _resid(lhs, rhs)
    lhs = X(Z) @ ((-1) ** p * np.linalg.matrix_power(F, p - 1)) @ X(Z)
    rhs = X(Zk[1])
    for j in range(2, p - 1):
        rhs = rhs @ R_MAT @ X(Yk[j])
    rhs = rhs @ R_MAT @ X(Zk[p])
    res[f"chain k={p - 1}"] = _resid(lhs, rhs)
    return {"p": p, "phi": phi, "residuals": res, "max_residual": max(res.values())}


def _resid(a, b) -> float:
    """Entrywise gap, relative to the entry scale once entries exceed 1."""
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a)))))


def boundary_walk(spine: Spine, face: Sequence[int]) -> Walk:
    """Walk around a boundary face; terminals are rounded with winding p-1."""
    return tuple((h, spine.orders[spine.iota[h]] - 1 if spine.is_terminal(spine.iota[h]) else None)
                 for h in face)


def trace_shape_report(spine: Spine, walk: Walk, ctx: SymbolicContext | None = None) -> dict:
    """Positivity of the symbolic trace and presence of the monomials e^(+-sum Z/2)."""
    ctx = ctx or SymbolicContext(spine)
    tr = symbolic_trace(spine, walk, ctx)
    counts = [0] * len(ctx.vars)
    for d, _ in walk:
        counts[ctx.vars.index(f"l{spine.edge_of[d]}")] += 1
    top, bottom = tuple(counts), tuple(-c for c in counts)
    one = ctx.field(1)
    integer = all(c.is_rational() and c.to_fraction().denominator == 1 and c.to_fraction() > 0
                  for c in tr.terms.values())
    return {"terms": len(tr.terms), "positive_integer": integer,
            "has_extremes": tr.terms.get(top) == one and tr.terms.get(bottom) == one,
            "positivity": positivity_report(tr, spine.orbifold_orders())}
