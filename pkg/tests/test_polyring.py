"""Multigraded polynomial arithmetic, substitution, and linear algebra."""

import pytest

from campedelli.scalars import QZ9, PrimeField
from campedelli.polyring import (InhomogeneousRuleError, PolyRing,
                                 binary_coeffs, binary_forms_coprime,
                                 hilbert_degree, parse_poly, row_reduce,
                                 subspace_membership)


@pytest.fixture(scope="module")
def ring():
    return PolyRing(QZ9, [("x", ("x0", "x1")), ("y", ("y0", "y1"))])


def test_ring_arithmetic(ring):
    x0, x1 = ring.var("x0"), ring.var("x1")
    f = (x0 + x1) * (x0 - x1)
    assert f == x0 ** 2 - x1 ** 2
    assert f - f == ring.zero()
    assert f * 0 == ring.zero()
    assert (f + 1) - 1 == f


def test_multidegree_tracking(ring):
    f = ring.monomial({"x0": 2, "y1": 3})
    assert f.multidegree() == (2, 3)
    g = ring.var("x0") * ring.var("y0")
    assert (f * g).multidegree() == (3, 4)


def test_derivative_product_rule(ring):
    f = ring.var("x0") ** 2 + ring.var("x1") * ring.var("y0")
    g = ring.var("x0") * ring.var("y1") + 1
    lhs = (f * g).derivative("x0")
    rhs = f.derivative("x0") * g + f * g.derivative("x0")
    assert lhs == rhs


def test_substitution_into_another_ring(ring):
    target = PolyRing(QZ9, [("u", ("u0", "u1"))])
    u0, u1 = target.var("u0"), target.var("u1")
    rule = {"x0": u0 + u1, "x1": u0 - u1, "y0": u0, "y1": u1}
    f = ring.var("x0") * ring.var("y0") + ring.var("x1") * ring.var("y1")
    img = f.substitute(rule)
    assert img.ring is target
    assert img == (u0 + u1) * u0 + (u0 - u1) * u1


def test_inhomogeneous_substitution_rejected(ring):
    target = PolyRing(QZ9, [("u", ("u0", "u1"))])
    u0 = target.var("u0")
    rule = {"x0": u0 + 1, "x1": u0, "y0": u0, "y1": u0}
    with pytest.raises(InhomogeneousRuleError):
        (ring.var("x0") * ring.var("y0")).substitute(rule)


def test_string_parse_roundtrip(ring):
    f = ring.var("x0") ** 2 * ring.var("y1") - ring.var("x1") ** 2 * \
        ring.var("y0") * 3
    assert parse_poly(ring, str(f)) == f


def test_row_reduce_finds_the_span(ring):
    x0, x1 = ring.var("x0"), ring.var("x1")
    space = row_reduce([x0 + x1, x0 - x1, x0 * 2])
    assert space.dimension == 2
    assert subspace_membership(x1 * 7, space)
    line = row_reduce([x0 + x1])
    assert not subspace_membership(x0 - x1, line)


def test_row_reduce_is_basis_independent(ring):
    x0, x1, y0 = ring.var("x0"), ring.var("x1"), ring.var("y0")
    a = row_reduce([x0, x1 + x0])
    b = row_reduce([x1, x0 - x1 * 5])
    assert [str(f) for f in a.basis] == [str(f) for f in b.basis]


def test_hilbert_degree_of_the_ambients():
    assert hilbert_degree([1, 8, 27, 64, 125]) == 6


def test_specialization_commutes_with_products(ring):
    F = PrimeField(19)
    fring = ring.with_field(F)
    f = ring.var("x0") + ring.var("x1") * 5
    g = ring.var("y0") - ring.var("y1")
    to_f = lambda h: h.map_coefficients(F.from_cyc, fring)
    assert to_f(f * g) == to_f(f) * to_f(g)
    assert to_f(f + f) == to_f(f) + to_f(f)


def test_binary_forms_coprime():
    tring = PolyRing(QZ9, [("t", ("t0", "t1"))])
    t0, t1 = tring.var("t0"), tring.var("t1")
    pair = [(binary_coeffs(f, "t0", "t1"), 3)
            for f in (t0 ** 3 + t1 ** 3, t0 ** 2 * t1)]
    assert binary_forms_coprime(pair)
    shared = [(binary_coeffs(f, "t0", "t1"), 3)
              for f in (t0 ** 2 * t1, t0 * t1 ** 2)]
    assert not binary_forms_coprime(shared)
