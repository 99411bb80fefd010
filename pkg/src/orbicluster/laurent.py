"""Sparse multivariate Laurent polynomials over a cyclotomic field."""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ring import CyclotomicField, FieldElem, format_elem, omega_coordinates, parse_elem

Exps = tuple[int, ...]


class InexactDivisionError(ArithmeticError):
    """Raised when a Laurent polynomial division leaves a remainder."""

    def __init__(self, message: str, dividend=None, divisor=None):
        super().__init__(message)
        self.dividend = dividend
        self.divisor = divisor


def _add_exps(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def _grlex_key(e: Exps):
    return (sum(e), e)


class LaurentPoly:
    """Laurent polynomial in named variables.

    ``terms`` maps exponent tuples (aligned with ``vars``) to nonzero field
    elements.  Instances are treated as immutable.
    """

    __slots__ = ("vars", "field", "terms", "_hash")

    def __init__(self, vars: Sequence[str], field: CyclotomicField,
                 terms: Mapping[Exps, FieldElem] | None = None):
        self.vars = tuple(vars)
        self.field = field
        clean = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match arity {n}")
                if not isinstance(c, FieldElem):
                    c = field(c)
                if not c.is_zero():
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # --- constructors
    @classmethod
    def zero(cls, vars, field):
        return cls(vars, field)

    @classmethod
    def constant(cls, value, vars, field):
        return cls(vars, field, {(0,) * len(vars): field(value)})

    @classmethod
    def variable(cls, name, vars, field):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, field, {tuple(e): field.one()})

    @classmethod
    def monomial(cls, exps: Mapping[str, int] | Exps, vars, field, coef=1):
        vars = tuple(vars)
        if isinstance(exps, Mapping):
            e = [0] * len(vars)
            for k, v in exps.items():
                e[vars.index(k)] += v
            exps = tuple(e)
        return cls(vars, field, {tuple(exps): field(coef)})

    @classmethod
    def _raw(cls, vars, field, terms):
        obj = cls.__new__(cls)
        obj.vars, obj.field, obj.terms, obj._hash = vars, field, terms, None
        return obj

    # --- inspection
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self):
        return len(self.terms)

    def min_exponents(self) -> Exps:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def max_exponents(self) -> Exps:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(col) for col in zip(*self.terms))

    def is_polynomial(self) -> bool:
        return all(x >= 0 for x in self.min_exponents())

    def coefficient_height(self) -> int:
        """Largest absolute numerator or denominator among coefficient coordinates."""
        h = 0
        for c in self.terms.values():
            h = max(h, abs(c.den), *(abs(x) for x in c.num))
        return h

    def depends_on(self, name: str) -> bool:
        i = self.vars.index(name)
        return any(e[i] for e in self.terms)

    # --- arithmetic
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise ValueError(f"arity mismatch: {self.vars} vs {other.vars}")
            if other.field.conductor != self.field.conductor:
                raise ValueError("coefficient field mismatch")
            return other
        if isinstance(other, (int, Fraction, FieldElem)):
            return LaurentPoly.constant(other, self.vars, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[e]
                else:
                    out[e] = v
        return LaurentPoly._raw(self.vars, self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.vars, self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            c0 = self.field(other) if not isinstance(other, FieldElem) else other
            if c0.is_zero():
                return LaurentPoly.zero(self.vars, self.field)
            return LaurentPoly._raw(self.vars, self.field,
                                    {e: c * c0 for e, c in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if len(self.terms) < len(o.terms):
            a, b = self.terms, o.terms
        else:
            a, b = o.terms, self.terms
        out: dict[Exps, FieldElem] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return LaurentPoly._raw(self.vars, self.field,
                                {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise InexactDivisionError("negative power of a non-monomial", self)
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.vars, self.field,
                                    {tuple(n * x for x in e): c ** n})
        result = LaurentPoly.constant(1, self.vars, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return exact_divide(self, o)

    def shift(self, exps: Exps) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly._raw(self.vars, self.field,
                                {_add_exps(e, exps): c for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            other = LaurentPoly.constant(other, self.vars, self.field)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # --- variable handling
    def with_vars(self, vars: Sequence[str]) -> "LaurentPoly":
        """Re-express over a variable tuple containing every variable used."""
        vars = tuple(vars)
        idx = []
        for i, name in enumerate(self.vars):
            if name in vars:
                idx.append(vars.index(name))
            elif self.depends_on(name):
                raise ValueError(f"variable {name!r} missing from target {vars}")
            else:
                idx.append(None)
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(vars)
            for i, x in enumerate(e):
                if idx[i] is not None:
                    new[idx[i]] += x
            out[tuple(new)] = c
        return LaurentPoly(vars, self.field, out)

    def evaluate(self, values: Mapping[str, complex] | Sequence[complex]):
        if isinstance(values, Mapping):
            values = [values[v] for v in self.vars]
        total = 0.0
        for e, c in self.terms.items():
            t = c.embed_complex()
            for x, k in zip(values, e):
                if k:
                    t *= x ** k
            total += t
        return total.real if isinstance(total, complex) and abs(total.imag) < 1e-9 * max(1.0, abs(total)) else total

    # --- text
    def leading_order(self) -> list[Exps]:
        return sorted(self.terms, key=_grlex_key, reverse=True)

    def to_text(self) -> str:
        return format_poly(self)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)!r}, vars={self.vars})"


# ---------------------------------------------------------------------------
# division and substitution

def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Return q with f = q*g, raising InexactDivisionError if none exists.

    The divisor's monomial content is stripped first; the rest is ordinary
    multivariate division under graded lex order.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if f.vars != g.vars:
        raise ValueError("arity mismatch in division")
    if f.is_zero():
        return f
    if g.is_monomial():
        (ge, gc), = g.terms.items()
        inv = gc.inverse()
        neg = tuple(-x for x in ge)
        return LaurentPoly._raw(f.vars, f.field,
                                {_add_exps(e, neg): c * inv for e, c in f.terms.items()})
    gmin = g.min_exponents()
    fmin = f.min_exponents()
    neg_g = tuple(-x for x in gmin)
    neg_f = tuple(-x for x in fmin)
    g0 = {_add_exps(e, neg_g): c for e, c in g.terms.items()}
    r = {_add_exps(e, neg_f): c for e, c in f.terms.items()}
    lt = max(g0, key=_grlex_key)
    lc_inv = g0[lt].inverse()
    g_rest = [(e, c) for e, c in g0.items() if e != lt]
    heap = [(-sum(e), tuple(-x for x in e)) for e in r]
    heapq.heapify(heap)
    q: dict[Exps, FieldElem] = {}
    while heap:
        _, ne = heapq.heappop(heap)
        e = tuple(-x for x in ne)
        c = r.pop(e, None)
        if c is None:
            continue
        m = tuple(x - y for x, y in zip(e, lt))
        if any(x < 0 for x in m):
            raise InexactDivisionError(
                f"inexact division: leading term {e} not divisible by {lt}", f, g)
        qc = c * lc_inv
        q[m] = qc
        for ge, gc in g_rest:
            key = tuple(x + y for x, y in zip(m, ge))
            old = r.get(key)
            if old is None:
                r[key] = -(qc * gc)
                heapq.heappush(heap, (-sum(key), tuple(-x for x in key)))
            else:
                v = old - qc * gc
                if v.is_zero():
                    del r[key]
                else:
                    r[key] = v
    shift = tuple(a - b for a, b in zip(fmin, gmin))
    return LaurentPoly._raw(f.vars, f.field, {_add_exps(e, shift): c for e, c in q.items()})


def poly_arith(f: LaurentPoly, g: LaurentPoly, op: str) -> LaurentPoly:
    if f.vars != g.vars:
        raise ValueError(f"arity mismatch: {f.vars} vs {g.vars}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: LaurentPoly, assignment: Mapping[str, LaurentPoly],
               target_vars: Sequence[str] | None = None) -> LaurentPoly:
    """Substitute Laurent polynomials for variables of f.

    Unassigned variables carry over unchanged and must exist in the target
    variable tuple.  A negative power of a non-monomial value is handled by
    clearing denominators first and dividing exactly at the end.
    """
    if target_vars is None:
        vals = list(assignment.values())
        target_vars = vals[0].vars if vals else f.vars
    target_vars = tuple(target_vars)
    field = f.field
    images: list[LaurentPoly] = []
    for name in f.vars:
        if name in assignment:
            img = assignment[name]
            if img.vars != target_vars:
                img = img.with_vars(target_vars)
            images.append(img)
        elif name in target_vars:
            images.append(LaurentPoly.variable(name, target_vars, field))
        else:
            if f.depends_on(name):
                raise ValueError(f"variable {name!r} has no image")
            images.append(LaurentPoly.constant(1, target_vars, field))
    fmin = f.min_exponents()
    clear = [(-m if (m < 0 and not images[i].is_monomial()) else 0) for i, m in enumerate(fmin)]
    if any(clear):
        for i, c in enumerate(clear):
            if c and images[i].is_zero():
                raise ZeroDivisionError(f"non-invertible substitution for {f.vars[i]}")
    cache: list[dict[int, LaurentPoly]] = [dict() for _ in images]

    def power(i: int, k: int) -> LaurentPoly:
        got = cache[i].get(k)
        if got is None:
            got = images[i] ** k
            cache[i][k] = got
        return got

    total = LaurentPoly.zero(target_vars, field)
    for e, c in f.terms.items():
        term = LaurentPoly.constant(c, target_vars, field)
        for i, k in enumerate(e):
            k += clear[i]
            if k:
                term = term * power(i, k)
        total = total + term
    if any(clear):
        denom = LaurentPoly.constant(1, target_vars, field)
        for i, c in enumerate(clear):
            if c:
                denom = denom * power(i, c)
        total = exact_divide(total, denom)
    return total


# ---------------------------------------------------------------------------
# positivity

def positivity_report(f: LaurentPoly, p_list: Iterable[int] | None = None) -> dict:
    """Sign information about the coefficients of f.

    "real" positivity uses the real embedding; "cone" positivity asks for
    nonnegative integer coordinates in the power basis of omega_p.
    """
    p_list = sorted(set(p_list or []))
    p = p_list[0] if len(p_list) == 1 else f.field.display_order
    negative, outside = [], []
    for e in f.leading_order():
        c = f.terms[e]
        val = c.embed_complex()
        if abs(val.imag) > 1e-9 or val.real <= 0:
            negative.append({"monomial": _format_monomial(f.vars, e) or "1",
                             "coefficient": format_elem(c)})
        coords = omega_coordinates(c, p)
        if coords is None or any(x < 0 or x.denominator != 1 for x in coords):
            outside.append({"monomial": _format_monomial(f.vars, e) or "1",
                            "coefficient": format_elem(c)})
    return {
        "terms": len(f.terms),
        "basis_order": p,
        "all_positive_real": not negative,
        "all_in_integer_cone": not outside,
        "negative_terms": negative,
        "outside_cone_terms": outside,
    }


# ---------------------------------------------------------------------------
# text form

def _format_monomial(vars, e) -> str:
    parts = []
    for name, k in zip(vars, e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return " ".join(parts)


def format_poly(f: LaurentPoly) -> str:
    """Canonical text, terms in decreasing graded lex order.

    Example: ``(1 + 2*w) * x^-1 y^2 + -3/2 * y``.
    """
    if f.is_zero():
        return "0"
    out = []
    for e in f.leading_order():
        c = f.terms[e]
        mono = _format_monomial(f.vars, e)
        cs = format_elem(c)
        if not mono:
            out.append(cs)
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{cs} * {mono}")
    return " + ".join(out)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            parts.append(text[start:i])
            i += len(sep)
            start = i
            continue
        i += 1
    parts.append(text[start:])
    return parts


_MONO_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_poly(text: str, vars: Sequence[str], field: CyclotomicField) -> LaurentPoly:
    """Parse the canonical text form (and mild variations of it)."""
    vars = tuple(vars)
    text = text.strip()
    total = LaurentPoly.zero(vars, field)
    if text == "0":
        return total
    for term in _split_top(text, " + "):
        term = term.strip()
        pieces = _split_top(term, " * ")
        if len(pieces) == 1:
            tok = pieces[0].strip()
            if tok.startswith("(") or re.match(r"^-?\d", tok):
                coef, mono = parse_elem(tok, field), ""
            else:
                coef, mono = field.one(), tok
        elif len(pieces) == 2:
            coef, mono = parse_elem(pieces[0], field), pieces[1].strip()
        else:
            raise ValueError(f"cannot parse term {term!r}")
        e = [0] * len(vars)
        for tok in mono.split():
            m = _MONO_RE.match(tok)
            if not m or m.group(1) not in vars:
                raise ValueError(f"bad monomial factor {tok!r} in {term!r}")
            e[vars.index(m.group(1))] += int(m.group(2) or 1)
        total = total + LaurentPoly(vars, field, {tuple(e): coef})
    return total
