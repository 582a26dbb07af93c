"""The three ambient threefolds: sections, special loci, enumeration."""

import pytest

from campedelli.scalars import PrimeField
from campedelli.polyring import hilbert_degree, row_reduce
from campedelli.ambient import restrict_to_curve, jacobian_screen
from campedelli.campedelli import get_family, prime_field

from helpers import member_once

F19 = prime_field(19)


@pytest.mark.parametrize("label", ("A", "B1", "B2"))
def test_section_dimension_sequence(label):
    W = get_family(label).ambient
    dims = W.hilbert_dimensions()
    assert dims == [1, 8, 27, 64, 125]
    assert hilbert_degree(dims) == 6


@pytest.mark.parametrize("label", ("A", "B1", "B2"))
def test_sections_reduce_mod_p(label):
    W = get_family(label).ambient
    assert W.section_space(3, F19).dimension == 64
    assert W.section_space(1, F19).dimension == 8


def test_flag_relation_reduces_to_zero():
    W = get_family("B1").ambient
    assert not W.normal_form(W.incidence_form())


def test_point_counts_over_f19():
    WA = get_family("A").ambient
    assert sum(1 for _ in WA.enumerate_points(F19)) == 20 ** 3
    WB1 = get_family("B1").ambient
    assert sum(1 for _ in WB1.enumerate_points(F19)) == 381 * 20
    WB2 = get_family("B2").ambient
    assert sum(1 for _ in WB2.enumerate_points(F19)) == 1 + 19 * (361 + 76 + 1)


def test_segre_fixed_loci():
    fam = get_family("A")
    W = fam.ambient
    for k in (1, 3):
        fl = W.fixed_locus(fam.action, (k,))
        assert len(fl) == (8 if k % 3 == 0 else 2)
        assert all(W.point_image(fam.action, (k,), p) == p for p in fl)


def test_flag_fixed_loci_and_stabilized_points():
    fam = get_family("B1")
    W = fam.ambient
    fl = W.fixed_locus(fam.action, (1, 1))
    assert len(fl) == 6
    assert all(W.on_flag(p) for p in fl)
    assert len(W.stabilized_plane_points(fam.action)) == 12


def test_cone_fixed_loci():
    fam = get_family("B2")
    W = fam.ambient
    assert len(W.fixed_locus(fam.action, (1, 0))) == 7
    assert len(W.fixed_locus(fam.action, (1, 1))) == 4


def test_segre_lines_support_cubes_only():
    fam = get_family("A")
    W = fam.ambient
    lines = W.lines()
    assert len(lines) == 6
    f = fam.ring.monomial({"x0": 3, "y0": 3, "z1": 3})
    for L in lines:
        r = restrict_to_curve(f, L)
        assert set(r.terms) <= {(3, 0), (0, 3)}


def test_cone_hexagon_and_rulings():
    fam = get_family("B2")
    W = fam.ambient
    hexes = W.hexagon_vertices()
    assert len(hexes) == 6
    assert all(not W.p7_vector(p)[0] for p in hexes)
    zcube = fam.ring.monomial({"z": 3})
    r = W.restrict_to_ruling(zcube, hexes[0])
    assert list(r.terms) == [(0, 3)]


def test_cone_coordinate_sections_span():
    W = get_family("B2").ambient
    coords = W.coordinate_sections()
    assert row_reduce(list(coords.values())).dimension == 8


@pytest.mark.parametrize("label", ("A", "B1", "B2"))
def test_jacobian_screen_on_a_sampled_member(label):
    fam = get_family(label)
    member = member_once(label, 0, (19,))
    rep = jacobian_screen(fam.ambient, member.section, F19)
    assert rep["clean"]
    assert rep["on_surface"] > 0
