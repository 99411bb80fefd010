"""Spines: ribbon graphs with pending edges ending at orbifold points.

Half-edges (darts) are integers.  ``sigma`` sends a dart to the next dart
counterclockwise around its vertex; a pending terminal is a one-dart vertex
with ``sigma[h] == h``.  ``iota`` pairs the two darts of an edge.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


class SpineError(ValueError):
    pass


@dataclass
class Spine:
    sigma: dict[int, int]
    edges: dict[int, tuple[int, int]]
    shear: dict[int, float]
    orders: dict[int, int] = field(default_factory=dict)   # terminal dart -> p
    surface: tuple[int, int, int] | None = None
    names: dict[int, str] = field(default_factory=dict)     # optional display names

    def __post_init__(self):
        self.iota = {}
        self.edge_of = {}
        for label, (a, b) in self.edges.items():
            self.iota[a], self.iota[b] = b, a
            self.edge_of[a] = self.edge_of[b] = label
        missing = set(self.sigma) ^ set(self.iota)
        if missing:
            raise SpineError(f"darts without both a vertex and an edge: {sorted(missing)}")
        self.vertex_of = {}
        for idx, cyc in enumerate(self.vertices()):
            for h in cyc:
                self.vertex_of[h] = idx

    # --- structure
    def vertices(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for h in sorted(self.sigma):
            if h in seen:
                continue
            cyc = [h]
            seen.add(h)
            nxt = self.sigma[h]
            while nxt != h:
                if nxt in seen:
                    raise SpineError(f"sigma is not a permutation near dart {h}")
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.sigma[nxt]
            out.append(tuple(cyc))
        return out

    @property
    def labels(self) -> list[int]:
        return sorted(self.edges)

    def is_terminal(self, h: int) -> bool:
        return self.sigma[h] == h

    def pending_edges(self) -> list[int]:
        return sorted({self.edge_of[h] for h in self.sigma if self.is_terminal(h)})

    def is_pending(self, label: int) -> bool:
        a, b = self.edges[label]
        return self.is_terminal(a) or self.is_terminal(b)

    def terminal_dart(self, label: int) -> int:
        a, b = self.edges[label]
        if self.is_terminal(b):
            return b
        if self.is_terminal(a):
            return a
        raise SpineError(f"edge {label} is not pending")

    def order(self, label: int) -> int:
        return self.orders[self.terminal_dart(label)]

    def orbifold_orders(self) -> list[int]:
        return sorted(self.orders.values())

    def name(self, label: int) -> str:
        return self.names.get(label, str(label))

    def faces(self) -> list[tuple[int, ...]]:
        """Boundary cycles of darts under h -> sigma(iota(h))."""
        seen, out = set(), []
        for h in sorted(self.sigma):
            if h in seen:
                continue
            cyc = []
            cur = h
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cur = self.sigma[self.iota[cur]]
            out.append(tuple(cyc))
        return out

    def copy(self, shear: Mapping[int, float] | None = None) -> "Spine":
        return Spine(dict(self.sigma), dict(self.edges), dict(shear if shear is not None else self.shear),
                     dict(self.orders), self.surface, dict(self.names))

    def with_shears(self, values: Mapping[int, float]) -> "Spine":
        sh = dict(self.shear)
        sh.update(values)
        return self.copy(sh)

    def euler_genus(self) -> tuple[int, int]:
        """(g, s) computed from the combinatorics."""
        V = len(self.vertices())
        E = len(self.edges)
        F = len(self.faces())
        chi = V - E + F
        return (2 - chi) // 2, F

    # --- serialization
    def to_json(self) -> dict:
        verts = []
        for cyc in self.vertices():
            if len(cyc) == 1 and self.is_terminal(cyc[0]):
                verts.append({"pending": cyc[0], "order": self.orders[cyc[0]]})
            else:
                verts.append({"cyclic": list(cyc)})
        edges = []
        for label in self.labels:
            e = {"label": label, "half_edges": list(self.edges[label]), "Z": self.shear[label]}
            if label in self.names:
                e["name"] = self.names[label]
            edges.append(e)
        out = {"vertices": verts, "edges": edges}
        if self.surface is not None:
            g, s, r = self.surface
            out["surface"] = {"g": g, "s": s, "r": r}
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Spine":
        sigma, orders = {}, {}
        for v in data["vertices"]:
            if "pending" in v:
                h = int(v["pending"])
                sigma[h] = h
                orders[h] = int(v["order"])
                if orders[h] < 2:
                    raise SpineError(f"orbifold order must be >= 2 at dart {h}")
            else:
                cyc = [int(h) for h in v["cyclic"]]
                for i, h in enumerate(cyc):
                    if h in sigma:
                        raise SpineError(f"dart {h} appears at two vertices")
                    sigma[h] = cyc[(i + 1) % len(cyc)]
        edges, shear, names = {}, {}, {}
        for e in data["edges"]:
            label = int(e["label"])
            if label in edges:
                raise SpineError(f"duplicate edge label {label}")
            a, b = e["half_edges"]
            edges[label] = (int(a), int(b))
            shear[label] = float(e.get("Z", 0.0))
            if "name" in e:
                names[label] = str(e["name"])
        surf = data.get("surface")
        surface = (int(surf["g"]), int(surf["s"]), int(surf["r"])) if surf else None
        return cls(sigma, edges, shear, orders, surface, names)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def build_spine(vertices: Iterable[Iterable[int]], edges: Mapping[int, tuple[int, int]],
                pending: Mapping[int, int] | None = None, shear=None, surface=None,
                names=None) -> Spine:
    """Assemble a spine from cyclic dart lists and a terminal-dart -> order map."""
    sigma = {}
    for cyc in vertices:
        cyc = list(cyc)
        for i, h in enumerate(cyc):
            sigma[h] = cyc[(i + 1) % len(cyc)]
    orders = dict(pending or {})
    for h in orders:
        sigma[h] = h
    shear = dict(shear or {})
    for label in edges:
        shear.setdefault(label, 0.0)
    return Spine(sigma, dict(edges), shear, orders, surface, dict(names or {}))


# ---------------------------------------------------------------------------
# validation

def expected_edge_count(g: int, s: int, r: int) -> int:
    return 6 * g - 6 + 3 * s + 2 * r


def validate(spine: Spine, g: int | None = None, s: int | None = None,
             r: int | None = None) -> dict:
    """Check counts, valences, labels, faces and the Euler characteristic."""
    if g is None or s is None or r is None:
        if spine.surface is None:
            raise SpineError("surface type (g, s, r) is required")
        g, s, r = spine.surface
    problems = []
    E = len(spine.edges)
    want = expected_edge_count(g, s, r)
    if E != want:
        problems.append(f"edge count {E} != 6g-6+3s+2r = {want}")
    if sorted(spine.edges) != list(range(1, E + 1)):
        problems.append("edge labels are not exactly 1..E")
    verts = spine.vertices()
    terminals = 0
    for cyc in verts:
        if len(cyc) == 1:
            if not spine.is_terminal(cyc[0]) or cyc[0] not in spine.orders:
                problems.append(f"one-valent vertex at dart {cyc[0]} has no orbifold order")
            terminals += 1
        elif len(cyc) != 3:
            problems.append(f"vertex {cyc} has valence {len(cyc)}")
    for h, p in spine.orders.items():
        if not spine.is_terminal(h):
            problems.append(f"dart {h} carries an order but is not a terminal")
        if p < 2:
            problems.append(f"order {p} at dart {h} is below 2")
    for label in spine.edges:
        a, b = spine.edges[label]
        if spine.is_terminal(a) and spine.is_terminal(b):
            problems.append(f"edge {label} joins two terminals")
    if terminals != r:
        problems.append(f"{terminals} pending terminals but r = {r}")
    faces = spine.faces()
    if len(faces) != s:
        problems.append(f"{len(faces)} boundary walks but s = {s}")
    V = len(verts)
    if V - E != 2 - 2 * g - s:
        problems.append(f"V - E = {V - E} != 2 - 2g - s = {2 - 2 * g - s}")
    return {"valid": not problems, "problems": problems, "E": E, "V": V,
            "faces": len(faces), "g": g, "s": s, "r": r}


def boundary_walks(spine: Spine) -> list[list[int]]:
    """Edge labels met along each face, pending edges showing up twice."""
    out = []
    for cyc in spine.faces():
        # the walk runs out to a terminal and back, so pending edges come twice
        out.append([spine.edge_of[h] for h in cyc])
    return out


# ---------------------------------------------------------------------------
# Poisson structure

def poisson_matrix(spine: Spine) -> list[list[int]]:
    """Constant bracket on shears; rows and columns follow sorted labels."""
    labels = spine.labels
    pos = {label: i for i, label in enumerate(labels)}
    n = len(labels)
    B = [[0] * n for _ in range(n)]
    for cyc in spine.vertices():
        if len(cyc) < 3:
            continue
        for i, h in enumerate(cyc):
            a = pos[spine.edge_of[h]]
            b = pos[spine.edge_of[cyc[(i + 1) % len(cyc)]]]
            B[a][b] += 1
            B[b][a] -= 1
    return B


def poisson_center(spine: Spine) -> list[list[int]]:
    """One multiplicity vector per boundary walk."""
    labels = spine.labels
    pos = {label: i for i, label in enumerate(labels)}
    out = []
    for walk in boundary_walks(spine):
        v = [0] * len(labels)
        for label in walk:
            v[pos[label]] += 1
        out.append(v)
    return out


def matrix_rank(rows: list[list]) -> int:
    """Exact rank over Q."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def poisson_report(spine: Spine) -> dict:
    B = poisson_matrix(spine)
    n = len(B)
    centers = poisson_center(spine)
    skew = all(B[i][j] == -B[j][i] for i in range(n) for j in range(n))
    in_kernel = all(sum(B[i][j] * v[j] for j in range(n)) == 0 for v in centers for i in range(n))
    rank = matrix_rank(B)
    center_rank = matrix_rank(centers) if centers else 0
    s = len(centers)
    return {"E": n, "s": s, "skew": skew, "rank": rank, "kernel_dim": n - rank,
            "centers_in_kernel": in_kernel, "center_rank": center_rank,
            "ok": skew and in_kernel and n - rank == s and center_rank == s}


# ---------------------------------------------------------------------------
# built-in library

def torus_with_hole(shear=None) -> Spine:
    """Two trivalent vertices joined by three edges with equal cyclic orders."""
    return build_spine([(0, 2, 4), (1, 3, 5)], {1: (0, 1), 2: (2, 3), 3: (4, 5)},
                       shear=shear, surface=(1, 1, 0))


def theta_graph(shear=None) -> Spine:
    """Planar theta graph: sphere with three holes."""
    return build_spine([(0, 2, 4), (1, 5, 3)], {1: (0, 1), 2: (2, 3), 3: (4, 5)},
                       shear=shear, surface=(0, 3, 0))


def two_orbifold_torus(p1: int = 3, p2: int = 3, shear=None) -> Spine:
    """Genus one, one hole, two pending edges Z1, Z2 and inner edges A, B, Y2, Y3, Y4."""
    edges = {1: (10, 11), 2: (12, 13), 3: (0, 1), 4: (2, 3), 5: (4, 5), 6: (6, 7), 7: (8, 9)}
    names = {1: "Z1", 2: "Z2", 3: "A", 4: "B", 5: "Y2", 6: "Y3", 7: "Y4"}
    verts = [(0, 2, 4), (1, 3, 9), (5, 10, 6), (7, 12, 8)]
    return build_spine(verts, edges, pending={11: p1, 13: p2}, shear=shear,
                       surface=(1, 1, 2), names=names)


def pants_dumbbell(shear=None) -> Spine:
    """Two loops joined by a bar; every hole but the outer one is loop-with-stem."""
    return build_spine([(0, 1, 2), (3, 4, 5)], {1: (0, 1), 2: (2, 3), 3: (4, 5)},
                       shear=shear, surface=(0, 3, 0), names={1: "P1", 2: "Y", 3: "P2"})


def orbifold_loop(p: int = 3, shear=None) -> Spine:
    """Sphere with two holes and two orbifold points.

    A loop bounding one hole hangs off a stem; the other side carries two
    pending edges.  E = 6*0 - 6 + 3*2 + 2*2 = 4.
    """
    edges = {1: (0, 1), 2: (2, 3), 3: (4, 5), 4: (6, 7)}
    verts = [(0, 1, 2), (3, 4, 6)]
    return build_spine(verts, edges, pending={5: p, 7: p}, shear=shear, surface=(0, 2, 2),
                       names={1: "P", 2: "Y", 3: "Z1", 4: "Z2"})


def two_holed_torus(shear=None) -> Spine:
    """Genus one with two holes, E = 6."""
    # torus graph with one edge subdivided and a loop-with-stem attached
    edges = {1: (0, 1), 2: (2, 3), 3: (4, 5), 4: (6, 7), 5: (8, 9), 6: (10, 11)}
    verts = [(0, 2, 4), (1, 3, 7), (5, 8, 6), (9, 10, 11)]
    return build_spine(verts, edges, shear=shear, surface=(1, 2, 0))


LIBRARY = {
    "torus-with-hole": torus_with_hole,
    "theta": theta_graph,
    "two-orbifold-torus": two_orbifold_torus,
    "pants-dumbbell": pants_dumbbell,
    "orbifold-loop": orbifold_loop,
    "two-holed-torus": two_holed_torus,
}


def random_spine(rng: random.Random, trivalent: int, pending: int = 0,
                 orders=(2, 3, 4, 5), max_tries: int = 1000) -> Spine:
    """Random connected spine with the given vertex counts.

    Darts are paired uniformly at random (terminal darts only with trivalent
    ones) and the attempt is repeated until the graph is connected.  The
    surface type is read off from the result.
    """
    if (3 * trivalent + pending) % 2:
        raise SpineError("total number of darts must be even")
    for _ in range(max_tries):
        tri = list(range(3 * trivalent))
        term = list(range(3 * trivalent, 3 * trivalent + pending))
        rng.shuffle(tri)
        if len(tri) < len(term):
            raise SpineError("not enough trivalent darts for the pending edges")
        pairs = [(tri.pop(), t) for t in term]
        while tri:
            a, b = tri.pop(), tri.pop()
            pairs.append((a, b))
        verts = [(3 * v, 3 * v + 1, 3 * v + 2) for v in range(trivalent)]
        rng.shuffle(pairs)
        edges = {i + 1: pr for i, pr in enumerate(pairs)}
        pend = {t: rng.choice(orders) for t in term}
        sp = build_spine(verts, edges, pending=pend)
        if not _connected(sp):
            continue
        g, s = sp.euler_genus()
        sp.surface = (g, s, pending)
        sp.shear = {label: rng.gauss(0.0, 1.0) for label in sp.edges}
        return sp
    raise SpineError("could not build a connected spine")


def _connected(spine: Spine) -> bool:
    adj: dict[int, set[int]] = {}
    for a, b in spine.edges.values():
        va, vb = spine.vertex_of[a], spine.vertex_of[b]
        adj.setdefault(va, set()).add(vb)
        adj.setdefault(vb, set()).add(va)
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(spine.vertices())
