"""Family pipelines: bases, characters, fixed points, members, degeneration."""

import pytest

from campedelli.campedelli import (DegenerateParametersError, FAMILY_LABELS,
                                   bicanonical_base_locus,
                                   base_point_lemma_check,
                                   centralizer_dimension,
                                   coordinate_characters, degeneration_check,
                                   eigenspace_table, expected_fixed_counts,
                                   fixed_point_counts_check, get_family,
                                   invariant_cubics, quadric_locus_check,
                                   restriction_supports_check, sample_member)

from helpers import member_once

EXPECTED_MODULI = {"A": 6, "B1": 7, "B2": 6}
EXPECTED_BASE_POINTS = {"A": 2, "B1": 0, "B2": 2}


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_invariant_cubics_match_the_reference_basis(label):
    t1 = invariant_cubics(get_family(label))
    assert t1.dimension == 8


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_eigenspace_table_sums_to_64(label):
    table = eigenspace_table(get_family(label))
    assert sum(table.values()) == 64
    dims = sorted(table.values())
    assert dims == [7] * 8 + [8]


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_coordinates_carry_the_nontrivial_characters(label):
    chars = coordinate_characters(get_family(label))
    assert len(chars) == 8
    assert all(not chi.is_trivial() for chi in chars.values())
    assert len({chi.label() for chi in chars.values()}) == 8


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_fixed_point_counts(label):
    rep = fixed_point_counts_check(get_family(label), primes=(19,))
    assert rep["exact_ok"] and rep["enumerated_ok"]


def test_expected_fixed_counts_shapes():
    a = expected_fixed_counts(get_family("A"))
    assert sorted(set(a.values())) == [2, 8]
    b2 = expected_fixed_counts(get_family("B2"))
    assert sorted(set(b2.values())) == [4, 7]


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_quadric_locus(label):
    rep = quadric_locus_check(get_family(label), primes=(19,))
    assert rep["ok"], rep


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_base_point_lemma(label):
    rep = base_point_lemma_check(get_family(label))
    assert not rep["witnesses"]
    assert rep["checked"] > 1000


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_restriction_supports(label):
    ok, witness = restriction_supports_check(get_family(label))
    assert ok, witness


def test_moduli_dimensions():
    for label in FAMILY_LABELS:
        cz, moduli = centralizer_dimension(get_family(label))
        assert 7 - cz == moduli == EXPECTED_MODULI[label]


def test_sample_member_is_deterministic():
    m1 = member_once("A", primes=(19,))
    m2 = sample_member(get_family("A"), seed=0, primes=(19,))
    assert m1.coefficients == m2.coefficients
    assert m1.screening["draws"] == m2.screening["draws"]


def test_sample_screening_records_the_avoided_fixed_points():
    avoided = {"A": "8 + 2", "B1": "24", "B2": "16"}
    for label in FAMILY_LABELS:
        m = member_once(label, primes=(19,))
        assert m.screening["fixed_points_avoided"] == avoided[label]


@pytest.mark.parametrize("label", FAMILY_LABELS)
def test_bicanonical_base_locus(label):
    rep = bicanonical_base_locus(member_once(label, primes=(19,)))
    assert rep.downstairs_points == EXPECTED_BASE_POINTS[label]
    if label == "B1":
        assert rep.upstairs_points == 0
    else:
        assert rep.upstairs_points == 18
        assert rep.orbit_count == 2


def test_degeneration_endpoints():
    b1 = degeneration_check(1, 0)
    assert b1["ok"] and b1["identified"] == "B1"
    b2 = degeneration_check(0, 1)
    assert b2["ok"] and b2["identified"] == "B2"
    mid = degeneration_check(1, 1)
    assert mid["ok"]
    with pytest.raises(DegenerateParametersError):
        degeneration_check(0, 0)
