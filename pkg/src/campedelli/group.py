"""Order-9 abelian groups, their characters, and linearized actions on the
polynomial rings from :mod:`campedelli.polyring`.

An action is stored as one substitution rule per generator plus an optional
twist: a character applied to each term with exponent (degree of the term in a
designated set of variables) / (a fixed denominator).  The twist is the usual
device for moving between the natural action on a section space and the
linearization inherited from the canonical ring of the quotient surface; it is
bookkept separately so substitution stays a ring homomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .polyring import Poly, PolyRing, row_reduce, SectionSpace


class ActionRelationError(ValueError):
    pass


class NoAdmissibleTwistError(ValueError):
    pass


class NonDiagonalizableError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    """Z_9 or Z_3 x Z_3; elements are exponent tuples over the generators."""

    kind: str  # "Z9" | "Z3xZ3"

    def __post_init__(self):
        if self.kind not in ("Z9", "Z3xZ3"):
            raise ValueError(self.kind)

    @property
    def orders(self):
        return (9,) if self.kind == "Z9" else (3, 3)

    def elements(self):
        if self.kind == "Z9":
            return [(k,) for k in range(9)]
        return [(i, j) for i in range(3) for j in range(3)]

    def identity(self):
        return tuple(0 for _ in self.orders)

    def generators(self):
        if self.kind == "Z9":
            return [(1,)]
        return [(1, 0), (0, 1)]

    def compose(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def inverse(self, a):
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def characters(self):
        return [Character(self, e) for e in self.elements()]

    def trivial_character(self):
        return Character(self, self.identity())


Z9 = AbelianGroup("Z9")
Z3xZ3 = AbelianGroup("Z3xZ3")


@dataclass(frozen=True)
class Character:
    group: AbelianGroup
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "exponents",
            tuple(e % n for e, n in zip(self.exponents, self.group.orders)))

    def value(self, elem, field):
        """chi(elem) as an element of the given scalar field."""
        if self.group.kind == "Z9":
            return field.zeta ** ((self.exponents[0] * elem[0]) % 9)
        k = (self.exponents[0] * elem[0] + self.exponents[1] * elem[1]) % 3
        return field.omega ** k

    def is_trivial(self):
        return all(e == 0 for e in self.exponents)

    def __mul__(self, other):
        assert self.group == other.group
        return Character(self.group, self.group.compose(
            self.exponents, other.exponents))

    def __pow__(self, n):
        return Character(self.group, tuple(
            (e * n) % m for e, m in zip(self.exponents, self.group.orders)))

    def inverse(self):
        return self ** (-1)

    def label(self):
        if self.group.kind == "Z9":
            return f"Z9:{self.exponents[0]}"
        return f"Z3xZ3:({self.exponents[0]},{self.exponents[1]})"

    def __repr__(self):
        return self.label()

    def __lt__(self, other):
        return self.exponents < other.exponents


@dataclass
class LinearizedGroupAction:
    """Per-generator substitution rules plus a formal twist character.

    ``rules`` maps each generator (exponent tuple) to a substitution
    dictionary over a reference ring in characteristic 0.  ``twist_char``
    multiplies the image of each term by chi^(d // twist_den) where d is the
    term's total degree in ``twist_vars``.  ``normalize`` is an optional
    post-substitution normal form (used on the flag variety, where sections
    are classes modulo the incidence form).
    """

    group: AbelianGroup
    ring: PolyRing
    rules: dict
    twist_char: Character | None = None
    twist_vars: frozenset = frozenset()
    twist_den: int = 1
    normalize: object = None
    _elem_rules: dict = dc_field(default_factory=dict, repr=False)

    def _compose_rules(self, first: dict, then: dict) -> dict:
        return {v: img.substitute(then) for v, img in first.items()}

    def element_rule(self, elem) -> dict:
        """Substitution rule of a group element, composed from the generators."""
        elem = tuple(e % n for e, n in zip(elem, self.group.orders))
        if elem in self._elem_rules:
            return self._elem_rules[elem]
        rule = {v: self.ring.var(v) for v in self.ring.variables}
        for gen, count in zip(self.group.generators(), elem):
            for _ in range(count):
                rule = self._compose_rules(rule, self.rules[gen])
        self._elem_rules[elem] = rule
        return rule

    def _twist_exponent(self, mono, ring) -> int:
        d = sum(e for i, e in enumerate(mono) if ring.variables[i] in
                self.twist_vars)
        if d % self.twist_den:
            raise ValueError(
                f"degree {d} in twist variables not divisible by {self.twist_den}")
        return d // self.twist_den

    def act(self, elem, f: Poly) -> Poly:
        """Image of the section f under the group element."""
        ring = f.ring
        rule = self.element_rule(elem)
        if ring is not self.ring:
            # field-specialized ring: map the reference rule over
            rule = {v: img.map_coefficients(ring.field.from_cyc, ring)
                    for v, img in rule.items()}
        out = ring.zero()
        if self.twist_char is None:
            out = f.substitute(rule)
        else:
            by_exp = {}
            for m, c in f.terms.items():
                e = self._twist_exponent(m, ring)
                by_exp.setdefault(e, {})[m] = c
            for e, terms in by_exp.items():
                tw = self.twist_char.value(elem, ring.field) ** e
                out = out + Poly(ring, terms).substitute(rule) * tw
        if self.normalize is not None:
            out = self.normalize(out)
        return out

    def natural_act(self, elem, f: Poly) -> Poly:
        """The action with the twist switched off (substitution only)."""
        saved = self.twist_char
        try:
            self.twist_char = None
            return self.act(elem, f)
        finally:
            self.twist_char = saved

    def with_twist(self, twist_char, twist_vars=None, twist_den=None):
        return LinearizedGroupAction(
            group=self.group, ring=self.ring, rules=self.rules,
            twist_char=twist_char,
            twist_vars=self.twist_vars if twist_vars is None else frozenset(twist_vars),
            twist_den=self.twist_den if twist_den is None else twist_den,
            normalize=self.normalize,
            _elem_rules=self._elem_rules)


def verify_action(action: LinearizedGroupAction, space: SectionSpace,
                  collect=None) -> bool:
    """Check the group relations hold exactly on every basis element.

    For order-9 groups this means: each generator to the power of its order
    acts as the identity, and the generator substitutions commute.  A False
    return records the violated relation and a witness in ``collect`` (a list)
    when given.
    """
    gens = action.group.generators()
    orders = action.group.orders
    ok = True
    for gen, n in zip(gens, orders):
        for b in space.basis:
            img = b
            for _ in range(n):
                img = action.act(gen, img)
            if img != b:
                ok = False
                if collect is not None:
                    collect.append((f"generator^{n} != id", str(b)))
    if len(gens) == 2:
        g1, g2 = gens
        for b in space.basis:
            if action.act(g1, action.act(g2, b)) != \
                    action.act(g2, action.act(g1, b)):
                ok = False
                if collect is not None:
                    collect.append(("generators do not commute", str(b)))
    return ok


def reynolds_project(f: Poly, action: LinearizedGroupAction,
                     chi: Character) -> Poly:
    """(1/9) sum_g chi(g)^-1 (g.f): projection onto the chi-eigenspace."""
    fld = f.ring.field
    if fld.characteristic != 0 and 9 % fld.characteristic == 0:
        raise ValueError("Reynolds operator needs 9 invertible in the field")
    acc = f.ring.zero()
    for e in action.group.elements():
        cv = chi.value(e, fld)
        acc = acc + action.act(e, f) * cv.inverse()
    ninth = fld.from_fraction(Fraction(1, 9))
    return acc * ninth


def eigenspace_decompose(space: SectionSpace,
                         action: LinearizedGroupAction) -> dict:
    """All nine character eigenspaces of the action on the given space.

    Each group element is applied to each basis section once; the nine
    projections are then linear combinations of those images.
    """
    if not space.basis:
        return {chi: SectionSpace([], space.multidegree, space.ambient)
                for chi in action.group.characters()}
    fld = space.ring.field
    if fld.characteristic != 0 and 9 % fld.characteristic == 0:
        raise ValueError("eigenspace projection needs 9 invertible in the field")
    images = {e: [action.act(e, b) for b in space.basis]
              for e in action.group.elements()}
    ninth = fld.from_fraction(Fraction(1, 9))
    out = {}
    total = 0
    for chi in action.group.characters():
        scalars = {e: chi.value(e, fld).inverse() * ninth
                   for e in action.group.elements()}
        projections = []
        for k in range(space.dimension):
            acc = space.ring.zero()
            for e, sc in scalars.items():
                acc = acc + images[e][k] * sc
            if acc:
                projections.append(acc)
        sub = row_reduce(projections, ambient=space.ambient) if projections \
            else SectionSpace([], space.multidegree, space.ambient)
        out[chi] = sub
        total += sub.dimension
    if total != space.dimension:
        raise NonDiagonalizableError(
            f"eigenspace dimensions sum to {total}, expected {space.dimension}")
    return out


def eigencharacter(f: Poly, action: LinearizedGroupAction,
                   natural=False) -> Character | None:
    """The character by which the action scales f, or None if f is not a
    common eigenvector."""
    fld = f.ring.field
    exps = []
    for gen in action.group.generators():
        img = action.natural_act(gen, f) if natural else action.act(gen, f)
        lead = f.ring.sorted_monomials(f.terms)[0]
        if lead not in img.terms:
            return None
        lam = img.terms[lead] / f.terms[lead]
        if img != f * lam:
            return None
        order = 9 if action.group.kind == "Z9" else 3
        root = fld.zeta if order == 9 else fld.omega
        for k in range(order):
            if root ** k == lam:
                exps.append(k)
                break
        else:
            return None
    return Character(action.group, tuple(exps))


def admissible_twist(action: LinearizedGroupAction,
                     coordinate_space: SectionSpace) -> Character:
    """The unique character t such that twisting the natural action by t gives
    the 8 degree-1 coordinates exactly the 8 nontrivial characters."""
    if coordinate_space.dimension != 8:
        raise NonDiagonalizableError(
            f"coordinate space has dimension {coordinate_space.dimension}, "
            "expected 8")
    base = action.with_twist(None)
    spaces = eigenspace_decompose(coordinate_space, base)
    natural = []
    ring = coordinate_space.ring
    for chi, sub in spaces.items():
        for b in sub.basis:
            w = action._twist_exponent(next(iter(b.terms)), ring)
            natural.append((chi, w))
    nontrivial = {c for c in action.group.characters() if not c.is_trivial()}
    found = None
    for t in action.group.characters():
        twisted = {chi * t ** w for chi, w in natural}
        if len(twisted) == 8 and twisted == nontrivial:
            if found is not None:
                raise NoAdmissibleTwistError("twist is not unique")
            found = t
    if found is None:
        raise NoAdmissibleTwistError(
            "no twist yields the 8 nontrivial characters")
    return found
