"""Group actions on section spaces: relations, characters, projections."""

import pytest

from campedelli.scalars import QZ9, ZETA
from campedelli.group import (Character, LinearizedGroupAction, Z9, Z3xZ3,
                              admissible_twist, eigencharacter,
                              eigenspace_decompose, reynolds_project,
                              verify_action)
from campedelli.campedelli import get_family


def test_group_structure():
    assert len(list(Z9.elements())) == 9
    assert len(list(Z3xZ3.elements())) == 9
    assert len(Z9.characters()) == 9
    assert len({c.label() for c in Z3xZ3.characters()}) == 9
    assert Z9.trivial_character().is_trivial()


def test_character_values_are_roots_of_unity():
    chi = Character(Z9, (1,))
    v = chi.value((1,), QZ9)
    assert v == ZETA
    assert chi.value((0,), QZ9) == QZ9.one
    prod = Character(Z3xZ3, (1, 2)) * Character(Z3xZ3, (2, 2))
    assert prod.exponents == (0, 1)


@pytest.mark.parametrize("label", ("A", "B1", "B2"))
def test_locked_actions_satisfy_the_relations(label):
    fam = get_family(label)
    space = fam.ambient.section_space(1)
    assert verify_action(fam.action, space)


def test_broken_action_is_rejected():
    fam = get_family("A")
    ring = fam.ring
    rules = dict(fam.action.element_rule((1,)))
    rules["z1"] = ring.var("x1") * ZETA  # order 27, not 9
    bad = LinearizedGroupAction(group=Z9, ring=ring, rules={(1,): rules})
    collect = []
    assert not verify_action(bad, fam.ambient.section_space(1), collect)
    assert collect


@pytest.mark.parametrize("label", ("A", "B1", "B2"))
def test_eigenspace_decomposition_is_complete(label):
    fam = get_family(label)
    space = fam.ambient.section_space(3)
    eig = eigenspace_decompose(space, fam.action)
    dims = [sp.dimension for sp in eig.values()]
    assert sum(dims) == 64
    assert eig[fam.group.trivial_character()].dimension == 8


def test_reynolds_projection_is_idempotent():
    fam = get_family("A")
    ring = fam.ring
    f = ring.monomial({"x0": 2, "x1": 1, "y0": 3, "z0": 3})
    chi = Character(Z9, (3,))
    proj = reynolds_project(f, fam.action, chi)
    assert reynolds_project(proj, fam.action, chi) == proj
    if proj:
        assert eigencharacter(proj, fam.action) == chi


def test_invariant_projection_lands_in_the_invariants():
    fam = get_family("B2")
    f = fam.ring.monomial({"x0": 3, "x1": 3, "x2": 3})
    proj = reynolds_project(f, fam.action, Z3xZ3.trivial_character())
    assert proj
    assert eigencharacter(proj, fam.action) == Z3xZ3.trivial_character()


@pytest.mark.parametrize("label", ("A", "B1", "B2"))
def test_admissible_twist_matches_the_stored_action(label):
    fam = get_family(label)
    space = fam.ambient.section_space(1)
    assert admissible_twist(fam.action, space) == fam.twist
