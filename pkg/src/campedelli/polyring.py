"""Multigraded multivariate polynomials over any scalar field from
:mod:`campedelli.scalars`.

A :class:`PolyRing` groups its variables into named blocks (one block per
projective factor, plus the cone variable for the singular ambient).  The
canonical monomial order is graded lexicographic inside each block, blocks in
declaration order; this makes echelon bases and the text format reproducible
bit for bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from . import linalg


class MissingVariableError(KeyError):
    pass


class InhomogeneousRuleError(ValueError):
    pass


class DegreeMismatchError(ValueError):
    pass


class NonPolynomialDataError(ValueError):
    pass


@dataclass(frozen=True)
class VariableBlock:
    """Named group of variables; ``weights`` feed the block degree (the cone
    variable over the sextic Del Pezzo counts with weight 3)."""

    name: str
    variables: tuple
    weights: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        w = self.weights
        if w is None:
            w = (1,) * len(self.variables)
        object.__setattr__(self, "weights", tuple(w))
        if len(self.weights) != len(self.variables):
            raise ValueError("one weight per variable")


class PolyRing:
    def __init__(self, field, blocks):
        self.field = field
        self.blocks = tuple(
            b if isinstance(b, VariableBlock) else VariableBlock(*b)
            for b in blocks)
        self.variables = tuple(v for b in self.blocks for v in b.variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be globally unique")
        self.var_index = {v: i for i, v in enumerate(self.variables)}
        self.block_index = {b.name: i for i, b in enumerate(self.blocks)}
        self.block_of_var = tuple(
            next(i for i, b in enumerate(self.blocks) if v in b.variables)
            for v in self.variables)
        self._block_slices = []
        start = 0
        for b in self.blocks:
            self._block_slices.append((start, start + len(b.variables)))
            start += len(b.variables)
        self.nvars = len(self.variables)
        self.weights = tuple(w for b in self.blocks for w in b.weights)

    # -- constructors ---------------------------------------------------------

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(self.field.one)

    def const(self, scalar):
        if isinstance(scalar, int):
            scalar = self.field.from_int(scalar)
        if not scalar:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: scalar})

    def var(self, name):
        if name not in self.var_index:
            raise MissingVariableError(name)
        mono = [0] * self.nvars
        mono[self.var_index[name]] = 1
        return Poly(self, {tuple(mono): self.field.one})

    def monomial(self, exps: dict, coeff=None):
        mono = [0] * self.nvars
        for v, e in exps.items():
            mono[self.var_index[v]] = e
        if coeff is None:
            coeff = self.field.one
        return Poly(self, {tuple(mono): coeff})

    def with_field(self, field):
        """Same block structure over a different scalar field."""
        return PolyRing(field, self.blocks)

    # -- monomial order -------------------------------------------------------

    def block_degrees(self, mono):
        return tuple(
            sum(e * w for e, w in zip(mono[a:b], self.weights[a:b]))
            for a, b in self._block_slices)

    def mono_key(self, mono):
        """Sort key; larger key means earlier in canonical order."""
        parts = []
        for a, b in self._block_slices:
            seg = mono[a:b]
            parts.append(sum(e * w for e, w in zip(seg, self.weights[a:b])))
            parts.extend(seg)
        return tuple(parts)

    def sorted_monomials(self, monos):
        return sorted(monos, key=self.mono_key, reverse=True)

    def mono_str(self, mono):
        parts = []
        for v, e in zip(self.variables, mono):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        names = ",".join(b.name for b in self.blocks)
        return f"PolyRing({self.field!r}; {names})"

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.field == self.field
                and other.blocks == self.blocks)

    def __hash__(self):
        return hash((id(self.field), self.blocks))


class Poly:
    """Immutable multigraded polynomial: mapping monomial -> nonzero scalar."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", {m: c for m, c in terms.items() if c})

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- ring operations ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            out = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    c = c1 * c2
                    s = out.get(m)
                    out[m] = c if s is None else s + c
            return Poly(self.ring, out)
        if isinstance(other, int):
            other = self.ring.field.from_int(other)
        return Poly(self.ring, {m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- degrees --------------------------------------------------------------

    def used_variables(self):
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ring.variables[i])
        return used

    def multidegree(self):
        """Per-block degree tuple, or None for 0 or inhomogeneous input."""
        degs = {self.ring.block_degrees(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self):
        return not self.terms or self.multidegree() is not None

    # -- substitution and evaluation ------------------------------------------

    def substitute(self, rule: dict) -> "Poly":
        """Ring homomorphism determined by variable -> polynomial images.

        Every variable that occurs in self must have an image; images must be
        per-block homogeneous.  Images may live in a different ring over the
        same field (restriction to a parametrized curve), in which case the
        result lives there too.
        """
        for v in self.used_variables():
            if v not in rule:
                raise MissingVariableError(v)
        target = self.ring
        for img in rule.values():
            if isinstance(img, Poly):
                target = img.ring
                break
        images = {}
        for v, img in rule.items():
            if isinstance(img, int):
                img = target.const(img)
            if img.ring is not target and img.ring != target:
                raise ValueError("substitution images in mixed rings")
            if not img.is_homogeneous():
                raise InhomogeneousRuleError(f"image of {v} is not homogeneous")
            images[v] = img
        out = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * images[self.ring.variables[i]] ** e
            out = out + term
        return out

    def evaluate(self, point: dict):
        """Evaluate at a scalar point; all occurring variables must be set."""
        for v in self.used_variables():
            if v not in point:
                raise MissingVariableError(v)
        fld = self.ring.field
        acc = fld.from_int(0)
        idx = self.ring.var_index
        for m, c in self.terms.items():
            val = c
            for v, s in point.items():
                e = m[idx[v]]
                if e:
                    val = val * s ** e
            acc = acc + val
        return acc

    def derivative(self, var: str) -> "Poly":
        """Formal partial derivative with respect to one variable."""
        i = self.ring.var_index[var]
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Poly(self.ring, out)

    def coefficient(self, mono_exps: dict):
        mono = [0] * self.ring.nvars
        for v, e in mono_exps.items():
            mono[self.ring.var_index[v]] = e
        return self.terms.get(tuple(mono), self.ring.field.from_int(0))

    def map_coefficients(self, func, new_ring: PolyRing) -> "Poly":
        return Poly(new_ring, {m: func(c) for m, c in self.terms.items()})

    # -- rendering ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self.ring.sorted_monomials(self.terms):
            c = self.terms[m]
            ms = self.ring.mono_str(m)
            if ms == "1":
                parts.append(f"({c})")
            else:
                parts.append(f"({c}) * {ms}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly[{self}]"


_TERM_RE = re.compile(r"\(([^()]*)\)(?:\s*\*\s*([A-Za-z0-9_^*]+))?")


def parse_poly(ring: PolyRing, text: str) -> Poly:
    """Parse the deterministic text format produced by ``str(Poly)``."""
    from .scalars import cyc_from_str

    text = text.strip()
    if text == "0":
        return ring.zero()
    out = ring.zero()
    pos = 0
    for chunk in text.split(" + "):
        m = _TERM_RE.fullmatch(chunk.strip())
        if not m:
            raise ValueError(f"bad term {chunk!r}")
        coeff_text, mono_text = m.group(1), m.group(2)
        if ring.field.characteristic == 0:
            coeff = cyc_from_str(coeff_text)
        else:
            coeff = ring.field.from_int(int(coeff_text))
        exps = {}
        if mono_text and mono_text != "1":
            for factor in mono_text.split("*"):
                if "^" in factor:
                    v, e = factor.split("^")
                    exps[v] = exps.get(v, 0) + int(e)
                else:
                    exps[factor] = exps.get(factor, 0) + 1
        out = out + ring.monomial(exps, coeff)
        pos += 1
    return out


# ---------------------------------------------------------------------------
# section spaces and exact linear algebra on them
# ---------------------------------------------------------------------------


@dataclass
class SectionSpace:
    """Reduced echelon basis of a span of homogeneous polynomials."""

    basis: list
    multidegree: tuple
    ambient: str = ""
    # monomial support in canonical order; pivot monomials come first in each
    # basis element
    monomials: list = dc_field(default_factory=list)

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def ring(self):
        return self.basis[0].ring if self.basis else None


def row_reduce(polys, multidegree=None, ambient="") -> SectionSpace:
    """Canonical echelon basis of the span of the given polynomials.

    All inputs must share the same multidegree (zero polynomials are
    ignored).  The result is independent of the input order.
    """
    polys = [p for p in polys if p]
    if not polys:
        return SectionSpace([], multidegree, ambient)
    ring = polys[0].ring
    degs = {p.multidegree() for p in polys}
    if None in degs or len(degs) != 1:
        raise DegreeMismatchError(f"mixed multidegrees: {degs}")
    deg = degs.pop()
    if multidegree is not None and tuple(multidegree) != deg:
        raise DegreeMismatchError(f"expected {multidegree}, got {deg}")
    monos = set()
    for p in polys:
        monos.update(p.terms)
    monos = ring.sorted_monomials(monos)
    col = {m: j for j, m in enumerate(monos)}
    zero = ring.field.from_int(0)
    rows = []
    for p in polys:
        row = [zero] * len(monos)
        for m, c in p.terms.items():
            row[col[m]] = c
        rows.append(row)
    reduced, _ = linalg.rref(rows, ring.field.one)
    basis = [Poly(ring, {m: row[j] for j, m in enumerate(monos) if row[j]})
             for row in reduced]
    return SectionSpace(basis, deg, ambient, monomials=monos)


def subspace_membership(f: Poly, space: SectionSpace) -> bool:
    """True iff f lies in the span of space.basis (exact reduction)."""
    if not f:
        return True
    if not space.basis:
        return False
    if f.multidegree() != space.multidegree:
        raise DegreeMismatchError(
            f"degree {f.multidegree()} vs space {space.multidegree}")
    return not reduce_against(f, space)


def reduce_against(f: Poly, space: SectionSpace) -> Poly:
    """Remainder of f after reduction by the echelon basis of the space."""
    ring = f.ring
    rem = f
    for b in space.basis:
        lead = ring.sorted_monomials(b.terms)[0]
        c = rem.terms.get(lead)
        if c:
            rem = rem - b * c
    return rem


def coordinates_in(f: Poly, space: SectionSpace):
    """Coordinates of f in the echelon basis, or None if f is outside."""
    ring = f.ring
    rem = f
    coords = []
    for b in space.basis:
        lead = ring.sorted_monomials(b.terms)[0]
        c = rem.terms.get(lead)
        if c:
            rem = rem - b * c
            coords.append(c)
        else:
            coords.append(ring.field.from_int(0))
    if rem:
        return None
    return coords


def hilbert_degree(dims) -> int:
    """Projective degree from the dimensions of H^0(O_W(m)), m = 0..4.

    Fits the unique cubic through the five points and returns 3! times its
    leading coefficient.
    """
    if len(dims) != 5:
        raise NonPolynomialDataError("need dimensions for m = 0..4")
    d = list(dims)
    diffs = [d]
    for _ in range(4):
        d = [d[i + 1] - d[i] for i in range(len(d) - 1)]
        diffs.append(d)
    if diffs[4][0] != 0:
        raise NonPolynomialDataError(
            f"data does not fit a cubic (4th difference {diffs[4][0]})")
    degree = diffs[3][0]  # = 6 * leading coefficient
    if degree <= 0:
        raise NonPolynomialDataError(f"nonpositive degree {degree}")
    return degree


# ---------------------------------------------------------------------------
# binary forms (sections restricted to parametrized curves)
# ---------------------------------------------------------------------------


def binary_coeffs(f: Poly, t0: str, t1: str):
    """Coefficient list [c_0, ..., c_d] of a binary form sum c_k t0^(d-k) t1^k."""
    if not f:
        return []
    ring = f.ring
    i0, i1 = ring.var_index[t0], ring.var_index[t1]
    d = max(m[i0] + m[i1] for m in f.terms)
    zero = ring.field.from_int(0)
    out = [zero] * (d + 1)
    for m, c in f.terms.items():
        for i, e in enumerate(m):
            if e and i not in (i0, i1):
                raise ValueError(f"not a binary form in ({t0},{t1})")
        out[m[i1]] = out[m[i1]] + c
    return out


def _poly1_divmod(a, b, one):
    """Univariate division over a field; coefficient lists, low degree first."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    inv = one / b[-1]
    q = [a[0] * 0] * max(da - db + 1, 0)
    for k in range(da - db, -1, -1):
        f = a[k + db] * inv
        q[k] = f
        for i in range(db + 1):
            a[k + i] = a[k + i] - f * b[i]
    while len(a) > 1 and not a[-1]:
        a.pop()
    return q, a


def binary_forms_coprime(forms) -> bool:
    """True iff the given binary forms have no common projective zero over the
    algebraic closure of the coefficient field.

    Each form is given as a (coeff list, formal degree) pair; the coefficient
    lists are in the convention of :func:`binary_coeffs`.
    """
    univ = []
    all_vanish_at_infinity = True
    for coeffs, d in forms:
        coeffs = list(coeffs)
        if not any(coeffs):
            continue
        if len(coeffs) == d + 1 and coeffs[-1]:
            all_vanish_at_infinity = False
        while len(coeffs) > 1 and not coeffs[-1]:
            coeffs.pop()
        univ.append(coeffs)
    if not univ:
        return False  # every form is identically zero
    if all_vanish_at_infinity:
        return False  # common zero at (t0:t1) = (0:1)
    one = next(c / c for c in univ[0] if c)
    g = univ[0]
    for h in univ[1:]:
        if len(g) == 1:
            break
        a, b = g, h
        while len(b) > 1 or b[0]:
            _, r = _poly1_divmod(a, b, one)
            a, b = b, r
        g = a
    return len(g) == 1 and bool(g[0])
