"""Seeds, standard and generalized mutation, and the checks built on them."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .laurent import InexactDivisionError, LaurentPoly, parse_poly, positivity_report
from .ring import CyclotomicField


class SeedError(ValueError):
    """Malformed exchange matrix or coefficient data."""


class LaurentViolation(ArithmeticError):
    """A mutation produced a non-Laurent expression."""

    def __init__(self, message, prefix, step):
        super().__init__(message)
        self.prefix = list(prefix)
        self.step = step


@dataclass(frozen=True)
class ExchangeMatrix:
    B: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "B", tuple(tuple(int(x) for x in row) for row in self.B))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))

    @property
    def n(self) -> int:
        return len(self.B)

    def violations(self) -> list[str]:
        out = []
        n = self.n
        if any(len(row) != n for row in self.B) or len(self.d) != n:
            return [f"shape mismatch: B is not {n}x{n} or d has wrong length"]
        for k, dk in enumerate(self.d):
            if dk < 1:
                out.append(f"d[{k + 1}] = {dk} is not positive")
        for i in range(n):
            for j in range(n):
                if self.B[i][j] * self.d[j] != -self.B[j][i] * self.d[i]:
                    out.append(f"not skew-symmetrizable at ({i + 1},{j + 1})")
        for k in range(n):
            if self.d[k] >= 1 and any(x % self.d[k] for x in self.B[k]):
                out.append(f"row {k + 1} not divisible by d[{k + 1}] = {self.d[k]}")
        return out

    def check(self):
        bad = self.violations()
        if bad:
            raise SeedError("; ".join(bad))

    def beta(self, k: int) -> tuple[int, ...]:
        """Row k divided by d_k (0-based k)."""
        return tuple(x // self.d[k] for x in self.B[k])

    def mutate(self, k: int) -> "ExchangeMatrix":
        return matrix_mutate(self, k)


def matrix_mutate(M: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation in direction k (0-based)."""
    n = M.n
    if not 0 <= k < n:
        raise IndexError(f"direction {k} out of range")
    B = M.B
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-B[i][j])
            else:
                row.append(B[i][j] + (abs(B[i][k]) * B[k][j] + B[i][k] * abs(B[k][j])) // 2)
        out.append(tuple(row))
    return ExchangeMatrix(tuple(out), M.d)


@dataclass(frozen=True)
class GenSeed:
    """Cluster, coefficient tuples and exchange matrix.

    Cluster variables and coefficients are Laurent polynomials over the same
    variable tuple: the initial cluster names followed by any coefficient
    generator names.  In ``tracked`` mode coefficients must be monomials in
    the generators; in ``fixed`` mode tuples must be palindromic and never change.
    """

    cluster: tuple[LaurentPoly, ...]
    coeffs: tuple[tuple[LaurentPoly, ...], ...]
    matrix: ExchangeMatrix
    mode: str = "fixed"
    names: tuple[str, ...] = dc_field(default=())

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def vars(self) -> tuple[str, ...]:
        return self.cluster[0].vars

    @property
    def field(self) -> CyclotomicField:
        return self.cluster[0].field

    def validate(self):
        self.matrix.check()
        if len(self.cluster) != self.n or len(self.coeffs) != self.n:
            raise SeedError("cluster/coefficient length does not match B")
        for i, tup in enumerate(self.coeffs):
            if len(tup) != self.matrix.d[i] + 1:
                raise SeedError(f"theta_{i + 1} needs {self.matrix.d[i] + 1} coefficients")
            if tup[0].is_zero() or tup[-1].is_zero():
                raise SeedError(f"theta_{i + 1} does not have degree {self.matrix.d[i]}")
            for c in tup:
                if any(c.depends_on(v) for v in self.names):
                    raise SeedError("coefficients may not involve cluster variables")
            if self.mode == "fixed" and tuple(tup) != tuple(reversed(tup)):
                raise SeedError(f"fixed mode needs a reciprocal theta_{i + 1}")
            if self.mode == "fixed" and not (tup[0] == 1 and tup[-1] == 1):
                # otherwise the ratio rule moves the other tuples and the
                # frozen pattern stops being an exchange pattern
                raise SeedError(f"fixed mode needs p_{i + 1};0 = p_{i + 1};d = 1")
            if self.mode == "tracked" and not all(c.is_monomial() for c in tup):
                raise SeedError("tracked mode needs monomial coefficients")
        if self.mode not in ("fixed", "tracked"):
            raise SeedError(f"unknown mode {self.mode!r}")
        return self

    def theta(self, k: int, u: LaurentPoly, v: LaurentPoly) -> LaurentPoly:
        dk = self.matrix.d[k]
        total = LaurentPoly.zero(self.vars, self.field)
        for ell, c in enumerate(self.coeffs[k]):
            total = total + c * (u ** ell) * (v ** (dk - ell))
        return total

    def key(self) -> tuple:
        return (tuple(c.to_text() for c in self.cluster),
                tuple(tuple(c.to_text() for c in t) for t in self.coeffs), self.matrix.B)

    def __eq__(self, other):
        return isinstance(other, GenSeed) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _tropical_normalize(tup: Sequence[LaurentPoly], skip: int) -> tuple[LaurentPoly, ...]:
    """Divide a tuple of monomials by their generator-exponent gcd.

    ``skip`` leading variables are cluster variables and are left alone.
    """
    mins = [min(next(iter(c.terms))[j] for c in tup) for j in range(tup[0].nvars)]
    shift = tuple(0 if j < skip else -m for j, m in enumerate(mins))
    if not any(shift):
        return tuple(tup)
    return tuple(c.shift(shift) for c in tup)


def generalized_mutate(seed: GenSeed, k: int) -> GenSeed:
    """Mutation in direction k (0-based) with degree-d_k exchange polynomials."""
    M = seed.matrix
    if any(x % M.d[k] for x in M.B[k]):
        raise SeedError(f"row {k + 1} not divisible by d[{k + 1}]")
    beta = M.beta(k)
    vars, fld = seed.vars, seed.field
    one = LaurentPoly.constant(1, vars, fld)
    u, v = one, one
    for j, b in enumerate(beta):
        if b > 0:
            u = u * seed.cluster[j] ** b
        elif b < 0:
            v = v * seed.cluster[j] ** (-b)
    num = seed.theta(k, u, v)
    try:
        new_xk = num / seed.cluster[k]
    except InexactDivisionError as exc:
        raise LaurentViolation(f"exchange in direction {k + 1} is not Laurent: {exc}", [], k) from exc
    cluster = list(seed.cluster)
    cluster[k] = new_xk
    coeffs = [tuple(t) for t in seed.coeffs]
    coeffs[k] = tuple(reversed(seed.coeffs[k]))
    if seed.mode == "tracked":
        dk = M.d[k]
        for i in range(seed.n):
            if i == k or beta[i] == 0:
                continue
            base = seed.coeffs[k][0] if beta[i] > 0 else seed.coeffs[k][dk]
            lam = base ** (-beta[i])
            scaled = [c * lam ** ell for ell, c in enumerate(seed.coeffs[i])]
            coeffs[i] = _tropical_normalize(scaled, len(seed.names))
    return GenSeed(tuple(cluster), tuple(coeffs), matrix_mutate(M, k), seed.mode, seed.names)


def standard_mutate(seed: GenSeed, k: int) -> GenSeed:
    """Binomial exchange x_k x_k' = p+ prod_{b_jk>0} x_j^b_jk + p- prod_{b_jk<0} x_j^-b_jk.

    Coefficient tuples are stored as (p+, p-).
    """
    M = seed.matrix
    if any(x != 1 for x in M.d):
        raise SeedError("standard mutation needs all d_i = 1")
    vars, fld = seed.vars, seed.field
    plus = LaurentPoly.constant(1, vars, fld)
    minus = plus
    for j in range(seed.n):
        b = M.B[j][k]
        if b > 0:
            plus = plus * seed.cluster[j] ** b
        elif b < 0:
            minus = minus * seed.cluster[j] ** (-b)
    pp, pm = seed.coeffs[k]
    try:
        new_xk = (pp * plus + pm * minus) / seed.cluster[k]
    except InexactDivisionError as exc:
        raise LaurentViolation(f"exchange in direction {k + 1} is not Laurent: {exc}", [], k) from exc
    cluster = list(seed.cluster)
    cluster[k] = new_xk
    coeffs = [tuple(t) for t in seed.coeffs]
    coeffs[k] = (pm, pp)
    if seed.mode == "tracked":
        for i in range(seed.n):
            b = M.B[k][i]
            if i == k or b == 0:
                continue
            base = pp if b > 0 else pm
            # p'+/p'- = base^b p+/p-, kept gcd-free
            pi_plus, pi_minus = seed.coeffs[i]
            coeffs[i] = _tropical_normalize((pi_plus * base ** b, pi_minus), len(seed.names))
    return GenSeed(tuple(cluster), tuple(coeffs), matrix_mutate(M, k), seed.mode, seed.names)


def mutate(seed: GenSeed, k: int) -> GenSeed:
    return generalized_mutate(seed, k)


def mutation_sequence(seed: GenSeed, dirs: Iterable[int], rule=generalized_mutate) -> list[GenSeed]:
    """All seeds along the path, starting with ``seed`` itself (0-based dirs)."""
    out = [seed]
    done = []
    for k in dirs:
        try:
            out.append(rule(out[-1], k))
        except LaurentViolation as exc:
            raise LaurentViolation(str(exc), done, len(done)) from exc
        done.append(k)
    return out


def exchange_cost(seed: GenSeed, k: int) -> int:
    """Upper bound on the term count of the exchange numerator in direction k."""
    beta = seed.matrix.beta(k)
    dk = seed.matrix.d[k]
    sizes = [len(x) for x in seed.cluster]
    total = 0
    for ell in range(dk + 1):
        t = 1
        for j, b in enumerate(beta):
            if b > 0:
                t *= sizes[j] ** (b * ell)
            elif b < 0:
                t *= sizes[j] ** (-b * (dk - ell))
        total += t
    return total


def check_laurent(seed: GenSeed, dirs: Sequence[int], rule=generalized_mutate,
                  term_budget: int | None = None) -> dict:
    """Mutate along dirs and report whether every division was exact.

    With ``term_budget`` the run stops before any exchange whose numerator
    could exceed that many terms; the report then marks the run as truncated.
    """
    seed.matrix.check()
    report = {"ok": True, "steps": 0, "requested": len(dirs), "truncated": False,
              "max_terms": max(len(x) for x in seed.cluster), "max_height": 0, "failure": None}
    cur = seed
    for step, k in enumerate(dirs):
        if term_budget is not None and exchange_cost(cur, k) > term_budget:
            report["truncated"] = True
            break
        try:
            cur = rule(cur, k)
        except LaurentViolation as exc:
            report["ok"] = False
            report["failure"] = {"step": step, "direction": k + 1,
                                 "prefix": [d + 1 for d in dirs[:step]], "message": str(exc)}
            break
        x = cur.cluster[k]
        report["steps"] = step + 1
        report["max_terms"] = max(report["max_terms"], len(x))
        report["max_height"] = max(report["max_height"], x.coefficient_height())
    return report


DEFAULT_TERM_BUDGET = 2_000_000


def random_directions(rng: random.Random, n: int, length: int) -> list[int]:
    """Random mutation directions without immediate repeats."""
    dirs: list[int] = []
    for _ in range(length):
        k = rng.randrange(n)
        while dirs and n > 1 and k == dirs[-1]:
            k = rng.randrange(n)
        dirs.append(k)
    return dirs


def laurent_sweep(rng: random.Random, samples: int = 200, max_length: int = 10, max_rank: int = 4,
                  orders: Sequence[int] = (4, 5), term_budget: int | None = DEFAULT_TERM_BUDGET) -> dict:
    """Random reciprocal seeds and random sequences; every division must be exact.

    Sequences whose next exchange polynomial would pass ``term_budget``
    terms are cut short and counted as truncated, not as passes or failures.
    """
    runs = []
    for _ in range(samples):
        n = rng.randint(2, max_rank)
        p = rng.choice(list(orders))
        seed = random_reciprocal_seed(rng, n, p)
        dirs = random_directions(rng, n, rng.randint(1, max_length))
        rep = check_laurent(seed, dirs, term_budget=term_budget)
        rep.update({"n": n, "p": p, "d": list(seed.matrix.d), "dirs": [k + 1 for k in dirs]})
        runs.append(rep)
    failures = [r for r in runs if not r["ok"]]
    return {
        "ok": not failures,
        "samples": samples,
        "inexact_divisions": len(failures),
        "divisions": sum(r["steps"] for r in runs),
        "requested": sum(r["requested"] for r in runs),
        "truncated": sum(r["truncated"] for r in runs),
        "term_budget": term_budget,
        "failures": failures,
        "max_terms": max((r["max_terms"] for r in runs), default=0),
    }


def finite_type_probe(seed: GenSeed, max_variables: int = 200, max_depth: int = 20) -> dict:
    """Breadth-first exploration of the exchange graph.

    Clusters are deduplicated by the sorted canonical text of their variables.
    """
    if seed.mode != "fixed":
        raise SeedError("finite-type probing needs fixed coefficients")
    seed.validate()

    def ckey(s):
        return tuple(sorted(x.to_text() for x in s.cluster))

    variables = {x.to_text() for x in seed.cluster}
    seen = {ckey(seed)}
    queue = deque([(seed, 0)])
    finite = True
    while queue:
        cur, depth = queue.popleft()
        if depth >= max_depth:
            finite = False
            continue
        for k in range(cur.n):
            nxt = generalized_mutate(cur, k)
            key = ckey(nxt)
            if key in seen:
                continue
            seen.add(key)
            variables.add(nxt.cluster[k].to_text())
            if len(variables) > max_variables:
                return {"finite": "unknown", "variable_count": len(variables),
                        "clusters": len(seen), "reason": "variable bound reached"}
            queue.append((nxt, depth + 1))
    if not finite:
        return {"finite": "unknown", "variable_count": len(variables),
                "clusters": len(seen), "reason": "depth bound reached"}
    return {"finite": True, "variable_count": len(variables), "clusters": len(seen),
            "variables": sorted(variables)}


def positivity_search(seed: GenSeed, depth: int, orders: Sequence[int] | None = None) -> dict:
    """Collect every cluster variable within ``depth`` mutations and report signs.

    Positivity here is a conjecture, so negative coefficients are findings,
    not errors.
    """
    seen_clusters = set()
    found: dict[str, LaurentPoly] = {}
    frontier = [seed]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for k in range(s.n):
                t = generalized_mutate(s, k)
                key = tuple(x.to_text() for x in t.cluster)
                if key in seen_clusters:
                    continue
                seen_clusters.add(key)
                found.setdefault(t.cluster[k].to_text(), t.cluster[k])
                nxt.append(t)
        frontier = nxt
    findings = []
    cone_ok = True
    for text, poly in sorted(found.items()):
        rep = positivity_report(poly, orders)
        cone_ok &= rep["all_in_integer_cone"]
        if not rep["all_positive_real"]:
            findings.append({"variable": text, "negative_terms": rep["negative_terms"]})
    return {"variables": len(found), "all_positive_real": not findings,
            "all_in_integer_cone": cone_ok, "counterexamples": findings}


# ---------------------------------------------------------------------------
# construction helpers

def make_seed(B, d, theta, names=None, generators=(), mode="fixed",
              field: CyclotomicField | None = None) -> GenSeed:
    """Build an initial seed.

    ``theta[i]`` lists p_{i;0..d_i}; entries may be numbers, field elements,
    Laurent polynomials or strings in the text format over the generators.
    """
    matrix = ExchangeMatrix(tuple(map(tuple, B)), tuple(d))
    n = matrix.n
    if names is None:
        names = ("x", "y") if n == 2 else tuple(f"x{i + 1}" for i in range(n))
    names = tuple(names)
    generators = tuple(generators)
    if set(names) & set(generators):
        raise SeedError("cluster and generator names overlap")
    vars = names + generators
    fld = field or CyclotomicField(1)
    cluster = tuple(LaurentPoly.variable(v, vars, fld) for v in names)
    coeffs = []
    for tup in theta:
        row = []
        for c in tup:
            if isinstance(c, LaurentPoly):
                row.append(c.with_vars(vars))
            elif isinstance(c, str):
                row.append(parse_poly(c, vars, fld))
            else:
                row.append(LaurentPoly.constant(c, vars, fld))
        coeffs.append(tuple(row))
    if mode == "tracked":
        coeffs = [_tropical_normalize(t, len(names)) if all(c.is_monomial() for c in t) else t
                  for t in coeffs]
    return GenSeed(cluster, tuple(coeffs), matrix, mode, names).validate()


def a2_seed() -> GenSeed:
    return make_seed([[0, 1], [-1, 0]], [1, 1], [[1, 1], [1, 1]])


def b2_seed() -> GenSeed:
    """theta_1 = a u^2 + b uv + c v^2 and theta_2 = p u + q v once theta_1 has fired."""
    return make_seed([[0, -2], [1, 0]], [2, 1], [["c", "b", "a"], ["a q", "p"]],
                     generators=("a", "b", "c", "p", "q"), mode="tracked")


def g2_seed() -> GenSeed:
    """theta_1 = a u^3 + b u^2 v + c u v^2 + d v^3, theta_2 = p u + q v after the first step."""
    return make_seed([[0, -3], [1, 0]], [3, 1], [["d", "c", "b", "a"], ["a q", "p"]],
                     generators=("a", "b", "c", "d", "p", "q"), mode="tracked")


def geometric_rank2_seed(p: int, d=(2, 1), b: int = 1) -> GenSeed:
    """Rank-2 seed whose degree-2 exchange polynomial is 1 + w t + t^2, w = omega_p."""
    fld = CyclotomicField.for_orders([p])
    w = fld.omega(p)
    d1, d2 = d
    B = [[0, -b * d1], [b * d2, 0]]
    theta = []
    for dk in d:
        if dk == 2:
            theta.append([1, w, 1])
        else:
            theta.append([1] * (dk + 1))
    return make_seed(B, d, theta, field=fld)


def random_reciprocal_seed(rng: random.Random, n: int, p: int, bmax: int = 3,
                           dmax: int = 3, zero_weight: float = 0.5) -> GenSeed:
    """Random skew-symmetrizable seed with palindromic tuples over Z[omega_p].

    Entries respect |b_ij| <= bmax, d_i <= dmax and row divisibility by d_i.
    """
    fld = CyclotomicField.for_orders([p])
    w = fld.omega(p)
    d = [rng.randint(1, dmax) for _ in range(n)]
    # B = D * beta with beta skew-symmetric is exactly the admissible shape;
    # half of the off-diagonal pairs are left uncoupled
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            smax = bmax // max(d[i], d[j])
            s = 0 if rng.random() < zero_weight else rng.choice(
                [x for x in range(-smax, smax + 1) if x])
            B[i][j], B[j][i] = d[i] * s, -d[j] * s
    theta = []
    for dk in d:
        half = [rng.choice([fld(1), fld(2), w, w + 1]) for _ in range(dk // 2 + 1)]
        tup = [fld(1)] + half[1:]
        full = tup + list(reversed(tup[: (dk + 1) // 2]))
        theta.append(full[: dk + 1])
    return make_seed(B, d, theta, field=fld)


def seed_from_json(data: dict) -> GenSeed:
    orders = data.get("orders", [])
    fld = CyclotomicField.for_orders(orders)
    n = data["n"]
    B = data["B"]
    if B and not isinstance(B[0], list):
        B = [B[i * n:(i + 1) * n] for i in range(n)]
    return make_seed(B, data["d"], data["theta"], names=data.get("variables"),
                     generators=data.get("generators", ()), mode=data.get("mode", "fixed"),
                     field=fld)


def seed_to_json(seed: GenSeed, orders: Sequence[int] | None = None) -> dict:
    out = {
        "n": seed.n,
        "B": [list(r) for r in seed.matrix.B],
        "d": list(seed.matrix.d),
        "theta": [[c.to_text() for c in t] for t in seed.coeffs],
        "mode": seed.mode,
        "variables": list(seed.names),
        "generators": [v for v in seed.vars if v not in seed.names],
        "cluster": [x.to_text() for x in seed.cluster],
    }
    if orders:
        out["orders"] = list(orders)
    return out


# ---------------------------------------------------------------------------
# reference rank-2 cycles, stored as (numerator, denominator monomial)

RANK2_REFERENCE = {
    "A2": {
        "dirs": [0, 1, 0, 1, 0],
        "generators": (),
        "values": [
            ("x1", "1 + y", "x"),
            ("y1", "1 + x + y", "x y"),
            ("x2", "1 + x", "y"),
        ],
    },
    "B2": {
        "dirs": [0, 1, 0, 1, 0, 1],
        "generators": ("a", "b", "c", "p", "q"),
        "values": [
            ("x1", "a + b y + c y^2", "x"),
            ("y1", "p x + q a + b q y + c q y^2", "x y"),
            ("x2", "a^2 q^2 + 2 a p q x + a c q^2 y^2 + a b q^2 y + b p q x y + p^2 x^2", "x y^2"),
            ("y2", "q a + p x", "y"),
        ],
    },
    "G2": {
        "dirs": [0, 1, 0, 1, 0, 1, 0, 1],
        "generators": ("a", "b", "c", "d", "p", "q"),
        "values": [
            ("x1", "a + b y + c y^2 + d y^3", "x"),
            ("y1", "p x + a q + b q y + c q y^2 + d q y^3", "x y"),
            ("x2", "a^3 q^3 + 2 a^2 c q^3 y^2 + 2 a^2 d q^3 y^3 + 3 a^2 p q^2 x + 2 a^2 b q^3 y"
                   " + 2 a b d q^3 y^4 + 3 a p^2 q x^2 + 4 a b p q^2 x y + a c^2 q^3 y^4"
                   " + 2 a c d q^3 y^5 + a d^2 q^3 y^6 + 3 a c p q^2 x y^2 + 3 a d p q^2 x y^3"
                   " + a b^2 q^3 y^2 + 2 a b c q^3 y^3 + b c p q^2 x y^3 + b d p q^2 x y^4"
                   " + p^3 x^3 + b^2 p q^2 x y^2 + 2 b p^2 q x^2 y + p^2 c q x^2 y^2", "x^2 y^3"),
            ("y2", "q^2 a^2 + a b q^2 y + a c q^2 y^2 + a d q^2 y^3 + 2 a p q x + b p q x y + p^2 x^2",
             "x y^2"),
            ("x3", "a^2 d q^3 y^3 + a^2 c q^3 y^2 + a c p q^2 x y^2 + a^2 b q^3 y + 2 a b p q^2 x y"
                   " + b p^2 q x^2 y + a^3 q^3 + 3 a^2 p q^2 x + 3 a p^2 q x^2 + p^3 x^3", "x y^3"),
            ("y3", "p x + a q", "y"),
        ],
    },
}


def parse_plain(text: str, vars, fld) -> LaurentPoly:
    """Parse a sum of terms like ``2 a^2 q x`` (integer coefficient, space-separated factors)."""
    total = LaurentPoly.zero(vars, fld)
    for term in text.split("+"):
        toks = term.split()
        coef = 1
        if toks and toks[0].lstrip("-").isdigit():
            coef = int(toks.pop(0))
        e = [0] * len(vars)
        for tok in toks:
            name, _, k = tok.partition("^")
            e[vars.index(name)] += int(k) if k else 1
        total = total + LaurentPoly(vars, fld, {tuple(e): coef})
    return total


def rank2_seed(kind: str) -> GenSeed:
    return {"A2": a2_seed, "B2": b2_seed, "G2": g2_seed}[kind]()


def rank2_cycle_check(kind: str) -> dict:
    """Run the alternating sequence and compare with the reference intermediates."""
    ref = RANK2_REFERENCE[kind]
    seed = rank2_seed(kind)
    seeds = mutation_sequence(seed, ref["dirs"])
    produced = []
    for s, k in zip(seeds[1:], ref["dirs"]):
        produced.append(s.cluster[k])
    vars, fld = seed.vars, seed.field
    comparisons = []
    for idx, (name, num, den) in enumerate(ref["values"]):
        expected = parse_plain(num, vars, fld) / parse_plain(den, vars, fld)
        got = produced[idx]
        comparisons.append({"name": name, "match": got == expected, "value": got.to_text()})
    # A2 comes back with the two variables swapped after five steps, so the
    # period is measured on unordered clusters; B2 and G2 must return exactly
    start = sorted(x.to_text() for x in seed.cluster)
    first_return = next((i for i in range(1, len(seeds))
                         if sorted(x.to_text() for x in seeds[i].cluster) == start), None)
    returned = seeds[-1] == seed if kind != "A2" else first_return is not None
    return {
        "type": kind,
        "period": first_return,
        "returns_to_initial": returned,
        "intermediates": comparisons,
        "ok": returned and first_return == len(ref["dirs"]) and all(c["match"] for c in comparisons),
    }
