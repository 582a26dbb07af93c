"""Exact cyclotomic and finite-field scalar arithmetic."""

from fractions import Fraction

import pytest

from campedelli.scalars import (OMEGA, QZ9, ZETA, BadPrimeError, Cyc,
                                PrimeField, QuadraticExtField, cyc_from_str,
                                specialize_mod_p)


def test_zeta_satisfies_minimal_polynomial():
    assert ZETA ** 6 + ZETA ** 3 + 1 == 0
    assert ZETA ** 9 == 1
    assert ZETA ** 3 != 1


def test_omega_is_a_primitive_cube_root():
    assert OMEGA == ZETA ** 3
    assert OMEGA ** 3 == 1
    assert OMEGA != 1
    assert OMEGA ** 2 + OMEGA + 1 == 0


def test_exact_rational_embedding():
    half = Cyc.from_rational(Fraction(1, 2))
    assert half + half == 1
    assert (half * QZ9.from_int(6)).rational_value() == 3
    assert QZ9.from_int(-4).is_rational()


def test_inverse_roundtrip():
    a = ZETA ** 2 + QZ9.from_int(3)
    assert a * a.inverse() == QZ9.one
    with pytest.raises(ZeroDivisionError):
        QZ9.zero.inverse()


def test_string_roundtrip():
    a = ZETA ** 5 - ZETA * Cyc.from_rational(Fraction(7, 3)) + 2
    assert cyc_from_str(str(a)) == a


def test_prime_field_requires_one_mod_nine():
    with pytest.raises(BadPrimeError):
        PrimeField(17)
    with pytest.raises(BadPrimeError):
        PrimeField(21)


def test_prime_field_zeta_image_has_order_nine():
    for p in (19, 37, 73):
        F = PrimeField(p)
        z = F.zeta
        assert z ** 9 == F.one
        assert z ** 3 != F.one


def test_reduction_is_a_ring_homomorphism():
    F = PrimeField(19)
    a = ZETA ** 4 + QZ9.from_int(2)
    b = ZETA - QZ9.from_int(5)
    assert F.from_cyc(a + b) == F.from_cyc(a) + F.from_cyc(b)
    assert F.from_cyc(a * b) == F.from_cyc(a) * F.from_cyc(b)
    assert specialize_mod_p(a, 19) == F.from_cyc(a)


def test_quadratic_extension_arithmetic():
    Fq = QuadraticExtField(19)
    z = Fq.from_cyc(ZETA)
    assert z ** 9 == Fq.from_int(1)
    a = Fq.from_int(7) + z
    assert a * a.inverse() == Fq.from_int(1)
    assert sum(1 for _ in Fq.elements()) == 361
