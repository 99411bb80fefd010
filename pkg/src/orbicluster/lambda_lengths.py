"""Lambda-lengths of decorated ideal polygons in the unit-disc chord model.

A decorated point is a point on the unit circle with a horocycle whose
size is encoded by a positive parameter h.  The lambda-length of the arc
joining two decorated points is chord / sqrt(h h').
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .laurent import LaurentPoly


@dataclass(frozen=True)
class DecoratedPoint:
    angle: float
    h: float = 1.0

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"horocycle parameter must be positive, got {self.h}")


def lambda_length(P: DecoratedPoint, Q: DecoratedPoint) -> float:
    chord = 2.0 * abs(math.sin((P.angle - Q.angle) / 2.0))
    if chord < 1e-15:
        raise ValueError("coincident points have no lambda-length")
    return chord / math.sqrt(P.h * Q.h)


def ptolemy_flip(a1, a2, a3, a4, d):
    """The other diagonal of a quadrilateral with sides a1..a4 (in order) and diagonal d."""
    if isinstance(d, LaurentPoly):
        if d.is_zero():
            raise ZeroDivisionError("zero diagonal")
        return (a1 * a3 + a2 * a4) / d
    if d == 0:
        raise ZeroDivisionError("zero diagonal")
    return (a1 * a3 + a2 * a4) / d


def pgon_diagonals(p: int, c: float) -> list[float]:
    """Lambda-lengths c_1..c_{p-1} of the k-diagonals of a regular decorated p-gon."""
    if p < 2 or not c > 0:
        raise ValueError("need p >= 2 and c > 0")
    s1 = math.sin(math.pi / p)
    return [c * math.sin(math.pi * k / p) / s1 for k in range(1, p)]


def verify_cc_prime(p: int, phi: float, h: float = 1.0, h2: float = 1.0) -> dict:
    """Check cc' = a^2 + omega_p ab + b^2 on the p-fold covering picture.

    Polygon vertices sit at angles 2 pi k / p with parameter h, apexes at
    2 pi k / p + phi with parameter h2.
    """
    if not 0 < phi < 2 * math.pi / p:
        raise ValueError(f"phi must lie in (0, 2pi/{p})")
    v0 = DecoratedPoint(0.0, h)
    v1 = DecoratedPoint(2 * math.pi / p, h)
    ap0 = DecoratedPoint(phi, h2)
    ap1 = DecoratedPoint(2 * math.pi / p + phi, h2)
    a = lambda_length(ap0, v1)
    b = lambda_length(v0, ap0)
    c = lambda_length(v0, v1)
    c2 = lambda_length(ap0, ap1)
    w = 2 * math.cos(math.pi / p)
    residual = abs(c * c2 - (a * a + w * a * b + b * b)) / (c * c2)
    return {"p": p, "phi": phi, "h": h, "h2": h2, "a": a, "b": b, "c": c, "c_prime": c2,
            "residual": residual}


def cc_prime_sweep(p: int, samples: int, rng: random.Random) -> list[dict]:
    out = []
    for _ in range(samples):
        phi = rng.uniform(0.0, 2 * math.pi / p)
        while phi <= 0.0:
            phi = rng.uniform(0.0, 2 * math.pi / p)
        h = math.exp(rng.uniform(-2.0, 2.0))
        h2 = math.exp(rng.uniform(-2.0, 2.0))
        out.append(verify_cc_prime(p, phi, h, h2))
    return out


def shear_from_lambda(a1: float, a2: float, a3: float, a4: float) -> float:
    """Shear of a diagonal from the four sides, listed cyclically from one of its ends."""
    if min(a1, a2, a3, a4) <= 0:
        raise ValueError("lambda-lengths must be positive")
    return math.log(a1 * a3 / (a2 * a4))
