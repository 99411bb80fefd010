"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as an integer numerator vector in the power basis
1, zeta, ..., zeta^(m-1) (m = phi(N)) together with a positive common
denominator.  This keeps multiplication in plain Python integers, which
matters because mutation sequences produce a lot of small products.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


def _poly_divmod_int(num: list[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (low degree first) by a monic divisor."""
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, b in enumerate(den):
                num[i - dd + j] -= c * b
    return q, num[:dd] if dd else []


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d.
    """
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, cyclotomic_polynomial(d))
            if any(rem):
                raise ArithmeticError(f"Phi_{d} does not divide x^{n}-1")
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def conductor_for(orders: Iterable[int]) -> int:
    """Smallest conductor whose field contains every omega_p for p in orders."""
    n = 2
    for p in orders:
        if p < 2:
            raise ValueError(f"orbifold order must be >= 2, got {p}")
        n = math.lcm(n, 2 * p)
    return n


class CyclotomicField:
    """The field Q[x]/Phi_N.

    ``display_order`` picks which omega_p is written as ``w`` in text output.
    By default it is N/2, whose omega generates the whole real subfield.
    """

    def __init__(self, conductor: int, display_order: int | None = None):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        self.modulus = cyclotomic_polynomial(conductor)
        self.degree = len(self.modulus) - 1
        if display_order is None and conductor % 2 == 0 and conductor >= 4:
            display_order = conductor // 2
        if display_order is not None and conductor % (2 * display_order):
            raise ValueError(f"omega_{display_order} is not in Q(zeta_{conductor})")
        self.display_order = display_order
        m = self.degree
        # zeta^j reduced, for j < 2m; products of reduced elements never exceed that
        self._powers = []
        for j in range(2 * m):
            vec = [0] * (2 * m)
            vec[j] = 1
            self._powers.append(tuple(self._reduce_long(vec)))
        self._roots = [cmath.exp(2j * math.pi * k / conductor) for k in range(m)]

    @classmethod
    def for_orders(cls, orders: Iterable[int]) -> "CyclotomicField":
        """Field of conductor lcm(2p); the rationals when no orders are given."""
        orders = list(orders)
        if not orders:
            return cls(1)
        n = conductor_for(orders)
        disp = orders[0] if len(set(orders)) == 1 else None
        return cls(n, disp)

    def _reduce_long(self, vec: list[int]) -> list[int]:
        vec = list(vec)
        m = self.degree
        for i in range(len(vec) - 1, m - 1, -1):
            c = vec[i]
            if c:
                for j in range(m + 1):
                    vec[i - m + j] -= c * self.modulus[j]
        return vec[:m]

    def __eq__(self, other):
        return (isinstance(other, CyclotomicField) and self.conductor == other.conductor
                and self.display_order == other.display_order)

    def __hash__(self):
        return hash((self.conductor, self.display_order))

    def __repr__(self):
        return f"CyclotomicField({self.conductor}, display_order={self.display_order})"

    # constructors
    def zero(self) -> "FieldElem":
        return FieldElem(self, (0,) * self.degree, 1)

    def one(self) -> "FieldElem":
        return self(1)

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.field.conductor == self.conductor:
                return FieldElem(self, value.num, value.den)
            return lift(value, self)
        fr = Fraction(value)
        num = [0] * self.degree
        num[0] = fr.numerator
        return FieldElem(self, tuple(num), fr.denominator)

    def zeta_power(self, k: int) -> "FieldElem":
        k %= self.conductor
        if k < 2 * self.degree:
            return FieldElem(self, self._powers[k], 1)
        z = FieldElem(self, self._powers[1], 1)
        return z ** k

    def omega(self, p: int) -> "FieldElem":
        return omega(p, self)

    def from_rationals(self, coeffs: Sequence) -> "FieldElem":
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > self.degree:
            raise ValueError("too many coefficients")
        fr += [Fraction(0)] * (self.degree - len(fr))
        den = math.lcm(*[f.denominator for f in fr]) if fr else 1
        return FieldElem(self, tuple(int(f * den) for f in fr), den)


class FieldElem:
    """An element of a cyclotomic field; immutable and hashable."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: CyclotomicField, num: tuple[int, ...], den: int = 1):
        if den != 1:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            g = den
            for c in num:
                if g == 1:
                    break
                g = math.gcd(g, c)
            if den < 0:
                g = -g
            if g != 1:
                num = tuple(c // g for c in num)
                den //= g
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # --- helpers
    def _coerce(self, other) -> "FieldElem":
        if type(other) is FieldElem:
            if other.field is not self.field and other.field.conductor != self.field.conductor:
                raise ValueError(
                    f"field mismatch: conductor {self.field.conductor} vs {other.field.conductor}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def coefficients(self) -> list[Fraction]:
        """Rational coordinates in the zeta power basis."""
        return [Fraction(c, self.den) for c in self.num]

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    # --- arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return FieldElem(self.field, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        return FieldElem(self.field,
                         tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
                         self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return FieldElem(self.field, tuple(a - b for a, b in zip(self.num, o.num)), self.den)
        return FieldElem(self.field,
                         tuple(a * o.den - b * self.den for a, b in zip(self.num, o.num)),
                         self.den * o.den)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElem(self.field, tuple(a * other for a in self.num), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.num, o.num
        m = self.field.degree
        if m == 1:
            return FieldElem(self.field, (a[0] * b[0],), self.den * o.den)
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        out = prod[:m]
        powers = self.field._powers
        for k in range(m, 2 * m - 1):
            c = prod[k]
            if c:
                for j, v in enumerate(powers[k]):
                    if v:
                        out[j] += c * v
        return FieldElem(self.field, tuple(out), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.field.degree == 1:
            return FieldElem(self.field, (self.den,), self.num[0])
        # extended Euclid over Q[x] against the modulus
        a = _trim([Fraction(c, self.den) for c in self.num])
        b = [Fraction(c) for c in self.field.modulus]
        s0, s1 = [Fraction(1)], [Fraction(0)]
        r0, r1 = a, b
        while len(r1) > 1 or r1[0] != 0:
            q, r = _qdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qsub(s0, _qmul(q, s1))
        # r0 is a nonzero constant
        c = r0[0]
        inv = [x / c for x in s0]
        m = self.field.degree
        vec = [Fraction(0)] * max(len(inv), m)
        for i, x in enumerate(inv):
            vec[i] = x
        den = math.lcm(*[x.denominator for x in vec])
        ints = self.field._reduce_long([int(x * den) for x in vec] + [0] * (m + 1))
        return FieldElem(self.field, tuple(ints), den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return (self.field.conductor == other.field.conductor and self.den == other.den
                and self.num == other.num)

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash((self.field.conductor, self.num, self.den))
        return self._hash

    def conjugate(self) -> "FieldElem":
        """Image under zeta -> zeta^{-1}."""
        out = self.field.zero()
        for k, c in enumerate(self.num):
            if c:
                out = out + self.field.zeta_power(-k) * c
        return FieldElem(self.field, out.num, out.den * self.den)

    def embed_complex(self) -> complex:
        roots = self.field._roots
        return sum(c * roots[k] for k, c in enumerate(self.num) if c) / self.den

    def embed_real(self) -> float:
        return embed_real(self)

    def __float__(self):
        return embed_real(self)

    def __repr__(self):
        return f"FieldElem({format_elem(self)!r}, N={self.field.conductor})"

    def __str__(self):
        return format_elem(self)


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _qmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _qsub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _qdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / b[-1]
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] -= c * y
    return _trim(q), _trim(a[:db] if db else [Fraction(0)])


def omega(p: int, field: CyclotomicField) -> FieldElem:
    """omega_p = 2cos(pi/p) = zeta^(N/2p) + zeta^(-N/2p)."""
    if p < 2:
        raise ValueError(f"orbifold order must be >= 2, got {p}")
    n = field.conductor
    if n % (2 * p):
        raise ValueError(f"conductor mismatch: 2*{p} does not divide {n}")
    s = n // (2 * p)
    return field.zeta_power(s) + field.zeta_power(-s)


def arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    ops = {"add": lambda: a + b, "sub": lambda: a - b, "mul": lambda: a * b, "div": lambda: a / b}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op]()


def embed_real(a: FieldElem) -> float:
    """Real value under zeta -> exp(2 pi i / N)."""
    z = a.embed_complex()
    if abs(z.imag) > 1e-9:
        raise ValueError(f"element is not real (imaginary part {z.imag:.3g})")
    return z.real


def lift(a: FieldElem, field: CyclotomicField) -> FieldElem:
    """Map an element of Q(zeta_n) into Q(zeta_N) for n | N."""
    n, big = a.field.conductor, field.conductor
    if big % n:
        raise ValueError(f"cannot embed conductor {n} into {big}")
    step = big // n
    out = field.zero()
    for k, c in enumerate(a.num):
        if c:
            out = out + field.zeta_power(k * step) * c
    return FieldElem(field, out.num, out.den * a.den)


@lru_cache(maxsize=None)
def _omega_basis_matrix(conductor: int, p: int):
    """Columns omega^j (j < m) in zeta coordinates, m = [Q(omega):Q]."""
    field = CyclotomicField(conductor, p)
    w = omega(p, field)
    cols = []
    power = field.one()
    while True:
        cand = cols + [power.coefficients()]
        if _rank(cand) < len(cand):
            break
        cols = cand
        power = power * w
    return cols


def _rank(vectors):
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def omega_coordinates(a: FieldElem, p: int | None = None) -> list[Fraction] | None:
    """Coordinates of a in the basis 1, w, ..., w^(m-1), w = omega_p.

    Returns None when a is not in the subfield Q(omega_p).
    """
    if a.is_rational():
        return [a.to_fraction()]
    if p is None:
        p = a.field.display_order
    if p is None or a.field.conductor % (2 * p):
        return None
    cols = _omega_basis_matrix(a.field.conductor, p)
    target = a.coefficients()
    m = len(cols)
    # solve sum_j x_j cols[j] = target by elimination on the augmented system
    nrows = len(target)
    aug = [[cols[j][i] for j in range(m)] + [target[i]] for i in range(nrows)]
    row = 0
    pivots = []
    for c in range(m):
        piv = next((r for r in range(row, nrows) if aug[r][c] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][c]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(nrows):
            if r != row and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(c)
        row += 1
    if any(aug[r][m] != 0 for r in range(row, nrows)):
        return None
    sol = [Fraction(0)] * m
    for r, c in enumerate(pivots):
        sol[c] = aug[r][m]
    return sol


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_elem(a: FieldElem) -> str:
    """Text form: a rational like ``-3/2`` or a parenthesized sum like ``(1 + 2*w)``.

    ``w`` is omega of the field's display order; elements outside Q(w) fall back
    to powers of ``z`` (zeta).
    """
    if a.is_rational():
        return _fmt_rational(a.to_fraction())
    coords = omega_coordinates(a) if a.field.display_order else None
    sym = "w"
    if coords is None:
        coords, sym = a.coefficients(), "z"
    parts = []
    for j, c in enumerate(coords):
        if c == 0:
            continue
        base = "1" if j == 0 else (sym if j == 1 else f"{sym}^{j}")
        if j == 0:
            parts.append(_fmt_rational(c))
        elif c == 1:
            parts.append(base)
        elif c == -1:
            parts.append(f"-{base}")
        else:
            parts.append(f"{_fmt_rational(c)}*{base}")
    text = parts[0]
    for part in parts[1:]:
        text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return f"({text})"


def parse_elem(text: str, field: CyclotomicField) -> FieldElem:
    """Inverse of :func:`format_elem`; also accepts plain numbers."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    w = omega(field.display_order, field) if field.display_order else None
    z = field.zeta_power(1)
    total = field.zero()
    for raw in s.replace(" - ", " + -").split(" + "):
        part = raw.strip()
        if not part:
            raise ValueError(f"empty term in {text!r}")
        if "*" in part:
            coef_s, base_s = part.split("*", 1)
            coef = Fraction(coef_s)
        else:
            coef_s, base_s = None, part
            coef = Fraction(1)
        base_s = base_s.strip()
        neg = False
        if coef_s is None and base_s.startswith("-") and base_s[1:2] in ("w", "z"):
            neg, base_s = True, base_s[1:]
        if base_s[:1] in ("w", "z"):
            sym, _, e = base_s.partition("^")
            exp = int(e) if e else 1
            val = (w if sym == "w" else z) ** exp
        else:
            if coef_s is not None:
                raise ValueError(f"cannot parse field element term {part!r}")
            val, coef = field.one(), Fraction(base_s)
        term = val * coef
        total = total + (-term if neg else term)
    return total
