import math
from fractions import Fraction

import pytest

from orbicluster.ring import (CyclotomicField, arith, cyclotomic_polynomial, embed_real,
                              format_elem, omega, omega_coordinates, parse_elem, totient)


@pytest.mark.parametrize("n, coeffs", [
    (1, (-1, 1)),
    (4, (1, 0, 1)),
    (12, (1, 0, -1, 0, 1)),
])
def test_cyclotomic_polynomial_examples(n, coeffs):
    assert tuple(cyclotomic_polynomial(n)) == coeffs


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_degree_is_totient_and_divides(n):
    phi = cyclotomic_polynomial(n)
    assert len(phi) - 1 == totient(n)
    assert phi[-1] == 1
    # x^n - 1 reduces to zero modulo phi
    num = [-1] + [0] * (n - 1) + [1]
    for top in range(len(num) - 1, len(phi) - 2, -1):
        c = num[top]
        if c:
            for i, a in enumerate(phi):
                num[top - len(phi) + 1 + i] -= c * a
    assert not any(num)


def test_omega_small_orders():
    fld = CyclotomicField.for_orders([2, 3, 4])
    assert omega(2, fld) == 0
    assert omega(3, fld) == 1
    assert embed_real(omega(4, fld)) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_omega_identities():
    f5 = CyclotomicField.for_orders([5])
    w5 = omega(5, f5)
    assert w5 * w5 == w5 + 1
    f6 = CyclotomicField.for_orders([6])
    w6 = omega(6, f6)
    assert w6 * w6 == 3
    f3 = CyclotomicField.for_orders([3])
    assert omega(3, f3) * omega(3, f3) == 1


def test_embed_real_examples():
    fld = CyclotomicField.for_orders([8])
    assert embed_real(fld(Fraction(7, 2))) == 3.5
    assert embed_real(omega(8, fld)) == pytest.approx(2 * math.cos(math.pi / 8), abs=1e-12)


def test_arith_and_inverse():
    fld = CyclotomicField.for_orders([5, 4])
    a = omega(5, fld) + 2
    b = omega(4, fld) - 1
    for op in ("add", "sub", "mul", "div"):
        got = embed_real(arith(a, b, op))
        x, y = embed_real(a), embed_real(b)
        want = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y}[op]
        assert got == pytest.approx(want, rel=1e-12)
    assert a * a.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        fld(0).inverse()


def test_omega_coordinates_and_text_roundtrip():
    fld = CyclotomicField.for_orders([5])
    w = omega(5, fld)
    assert omega_coordinates(w - 1, 5) == [-1, 1]
    for elem in (w, 2 * w + 3, w * w * w - Fraction(1, 3)):
        assert parse_elem(format_elem(elem), fld) == elem
