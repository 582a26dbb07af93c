"""The three ambient threefolds W: the triple product of projective lines, the
flag variety in P2 x P2*, and the cone over the sextic Del Pezzo surface.

Each model provides: canonical section spaces, a normal form where sections
are residue classes (the flag variety), evaluation of sections at points,
exact fixed loci of the structured group actions (diagonal and
coordinate-permutation actions and their composites), point enumeration over
finite fields, and the parametrized curves (lines and rulings) that carry the
bicanonical analysis.

Cone points come in three kinds: the vertex, points over an ordinary plane
point of the blown-up P2, and points over the exceptional lines.  A section
of O_W(m) is evaluated at an exceptional point by substituting the local
parametrization x = e_k + t*d and taking the t^i-coefficient on the summand
of Sigma-degree i; the embedding-coordinate vector in P7 built from those
values is the canonical external representation of a cone point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .scalars import QZ9
from .polyring import (Poly, PolyRing, VariableBlock, SectionSpace,
                       row_reduce, reduce_against)


class UnsupportedDegreeError(ValueError):
    pass


class StructureError(ValueError):
    """The fixed locus was requested for an action outside the structured
    cases (diagonal / coordinate permutation composites)."""


class InfiniteFixedLocusError(ValueError):
    pass


class BlockMismatchError(ValueError):
    pass


MAX_DEGREE = 6


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------


def normalize_tuple(vals):
    """Scale a projective coordinate tuple so its first nonzero entry is 1."""
    vals = tuple(vals)
    for v in vals:
        if v:
            inv = v ** (-1)
            return tuple(x * inv for x in vals)
    raise ValueError("zero coordinate tuple")


@dataclass(frozen=True)
class Point:
    """Point of a product of projective spaces; one normalized tuple per
    block."""

    blocks: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks",
                           tuple(normalize_tuple(b) for b in self.blocks))


@dataclass(frozen=True)
class ConePoint:
    """Point of the cone over the sextic Del Pezzo surface.

    kind "vertex": no further data.  kind "plane": x is a normalized P2 point
    away from the three base points, z the fiber value.  kind "exceptional":
    center is the index of the blown-up coordinate point, direction the
    normalized tangent direction (coordinates for the two other variables in
    increasing index order), z the fiber value in the trivialization fixed by
    the normalized direction.
    """

    kind: str
    x: tuple = None
    center: int = None
    direction: tuple = None
    z: object = None

    def __post_init__(self):
        if self.kind not in ("vertex", "plane", "exceptional"):
            raise ValueError(self.kind)
        if self.kind == "plane":
            object.__setattr__(self, "x", normalize_tuple(self.x))
        if self.kind == "exceptional":
            object.__setattr__(self, "direction",
                               normalize_tuple(self.direction))


@dataclass(frozen=True)
class PointSet:
    points: tuple
    field_desc: str
    orbits: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "orbits",
                           tuple(tuple(o) for o in self.orbits))
        if len(set(self.points)) != len(self.points):
            raise ValueError("points not pairwise distinct")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class ParametrizedCurve:
    """A line (or ruling) parametrized by one P1 with parameters (t0, t1).

    ``images`` maps coordinate names to homogeneous polynomials in the
    parameter ring; the names are ambient variables for curves inside the
    product models, and embedding-coordinate labels for the lines of the Del
    Pezzo surface.
    """

    name: str
    images: dict

    @property
    def param_ring(self):
        for img in self.images.values():
            if isinstance(img, Poly):
                return img.ring
        raise ValueError("curve with constant images only")


def curve_param_ring(field):
    return PolyRing(field, [("t", ("t0", "t1"))])


def restrict_to_curve(f: Poly, curve: ParametrizedCurve) -> Poly:
    """Substitute the curve parametrization into the section."""
    for v in f.used_variables():
        if v not in curve.images:
            raise BlockMismatchError(
                f"curve {curve.name} does not set variable {v}")
    return f.substitute(curve.images)


# ---------------------------------------------------------------------------
# shared helpers for structured linear actions
# ---------------------------------------------------------------------------


def element_rule_in(action, elem, ring):
    rule = action.element_rule(elem)
    if ring is action.ring:
        return rule
    return {v: img.map_coefficients(ring.field.from_cyc, ring)
            for v, img in rule.items()}


def linear_block_matrix(ring, rule, block_vars, src_vars=None):
    """Read off (source variables, matrix) for a rule that maps a block of
    variables to linear forms in one common block of variables.

    With ``src_vars`` given, the matrix columns are exactly those variables
    and any stray variable in an image is an error; otherwise the source
    block is inferred from the images.
    """
    if src_vars is None:
        src = None
        for v in block_vars:
            for u in rule[v].used_variables():
                blk = ring.blocks[
                    ring.block_of_var[ring.var_index[u]]].variables
                if src is None:
                    src = blk
                elif blk != src:
                    raise StructureError(f"rule image of {v} mixes blocks")
        if src is None:
            raise StructureError("rule acts by zero")
    else:
        src = tuple(src_vars)
    rows = []
    for v in block_vars:
        img = rule[v]
        row = [img.coefficient({u: 1}) for u in src]
        # every term of the image must be linear in a source variable
        if len(img.terms) != sum(1 for c in row if c):
            raise StructureError(f"rule image of {v} is not linear in {src}")
        rows.append(row)
    return tuple(src), rows


def mat_vec(rows, vec, zero):
    return tuple(sum((r[j] * vec[j] for j in range(len(vec))), zero)
                 for r in rows)


def mat_mul(a, b, zero):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(k)), zero)
             for j in range(m)] for i in range(n)]


def mat2_inverse(m, field):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if not det:
        raise StructureError("singular 2x2 block matrix")
    inv = det ** (-1)
    return [[m[1][1] * inv, -m[0][1] * inv],
            [-m[1][0] * inv, m[0][0] * inv]]


def is_diagonal(rows):
    return all(not rows[i][j] for i in range(len(rows))
               for j in range(len(rows)) if i != j)


def eigenvectors_2x2(m, field):
    """Eigenpairs of a diagonal 2x2 matrix with distinct eigenvalues."""
    if not is_diagonal(m):
        raise StructureError("2x2 eigenproblem outside the diagonal case")
    if m[0][0] == m[1][1]:
        raise InfiniteFixedLocusError("repeated eigenvalue on a P1 factor")
    one, zero = field.one, field.from_int(0)
    return [(m[0][0], (one, zero)), (m[1][1], (zero, one))]


def eigenvectors_3x3(m, field):
    """Eigenpairs of a 3x3 matrix of one of the structured shapes: diagonal,
    or with cube a scalar matrix (coordinate permutation composites).

    Requires three distinct eigenvalues; the eigenvalues are ninth roots of
    unity times nothing else, so candidates are scanned among zeta powers.
    """
    zero, one = field.from_int(0), field.one
    if is_diagonal(m):
        vals = [m[i][i] for i in range(3)]
        if len({vals[0], vals[1], vals[2]}) != 3:
            raise InfiniteFixedLocusError("repeated eigenvalue on P2")
        vecs = [(one, zero, zero), (zero, one, zero), (zero, zero, one)]
        return list(zip(vals, vecs))
    m3 = mat_mul(mat_mul(m, m, zero), m, zero)
    c = m3[0][0]
    if not is_diagonal(m3) or m3[1][1] != c or m3[2][2] != c or not c:
        raise StructureError("matrix cube is not scalar")
    root = None
    for k in range(9):
        cand = field.zeta ** k
        if cand ** 3 == c:
            root = cand
            break
    if root is None:
        raise StructureError("no ninth-root-of-unity cube root available")
    omega = field.omega
    out = []
    for lam in (root, root * omega, root * omega ** 2):
        shifted = [[m[i][j] - (lam if i == j else zero)
                    for j in range(3)] for i in range(3)]
        ker = linalg.kernel_basis(shifted, 3, one, zero)
        if len(ker) != 1:
            raise StructureError("eigenvalue multiplicity > 1")
        out.append((lam, tuple(ker[0])))
    return out


# ---------------------------------------------------------------------------
# the Segre triple product (type A ambient)
# ---------------------------------------------------------------------------


class AmbientThreefold:
    label = ""

    def __init__(self):
        self._rings = {}
        self._sections = {}

    def base_ring(self):
        raise NotImplementedError

    def ring_for(self, field):
        if field is QZ9:
            return self.base_ring()
        key = id(field)
        if key not in self._rings:
            self._rings[key] = self.base_ring().with_field(field)
        return self._rings[key]

    def _check_degree(self, m):
        if not (0 <= m <= MAX_DEGREE):
            raise UnsupportedDegreeError(f"degree {m} outside 0..{MAX_DEGREE}")

    def section_space(self, m, field=QZ9) -> SectionSpace:
        self._check_degree(m)
        key = (m, id(field))
        if key not in self._sections:
            self._sections[key] = self._build_sections(m, field)
        return self._sections[key]

    def hilbert_dimensions(self):
        return [self.section_space(m).dimension for m in range(5)]

    def normal_form(self, f: Poly) -> Poly:
        return f

    def specialize(self, f: Poly, field) -> Poly:
        """Map a characteristic-0 section into the model over field."""
        if field is QZ9:
            return f
        ring = self.ring_for(field)
        return f.map_coefficients(field.from_cyc, ring)


class SegreP1Cubed(AmbientThreefold):
    """(P1)^3 with coordinate pairs (x0,x1), (y0,y1), (z0,z1)."""

    label = "A"
    factor_names = ("x", "y", "z")

    def __init__(self):
        super().__init__()
        self._ring0 = PolyRing(QZ9, [("x", ("x0", "x1")),
                                     ("y", ("y0", "y1")),
                                     ("z", ("z0", "z1"))])

    def base_ring(self):
        return self._ring0

    def _build_sections(self, m, field):
        ring = self.ring_for(field)
        monos = []
        for a in range(m + 1):
            for b in range(m + 1):
                for c in range(m + 1):
                    monos.append(ring.monomial({
                        "x0": m - a, "x1": a, "y0": m - b, "y1": b,
                        "z0": m - c, "z1": c}))
        return row_reduce(monos, ambient=self.label)

    # -- points ---------------------------------------------------------------

    def point_dict(self, pt: Point):
        (x0, x1), (y0, y1), (z0, z1) = pt.blocks
        return {"x0": x0, "x1": x1, "y0": y0, "y1": y1, "z0": z0, "z1": z1}

    def evaluate_section(self, f: Poly, pt: Point):
        return f.evaluate(self.point_dict(pt))

    def enumerate_points(self, field):
        line = [(field.one, t) for t in field.elements()] \
            + [(field.from_int(0), field.one)]
        for bx in line:
            for by in line:
                for bz in line:
                    yield Point((bx, by, bz))

    def _factor_maps(self, action, elem, field):
        ring = self.ring_for(field)
        rule = element_rule_in(action, elem, ring)
        maps = {}
        for name in self.factor_names:
            blk = next(b.variables for b in ring.blocks if b.name == name)
            src, rows = linear_block_matrix(ring, rule, blk)
            src_name = next(b.name for b in ring.blocks if b.variables == src)
            maps[name] = (src_name, rows)
        return maps

    def point_image(self, action, elem, pt: Point, field=QZ9):
        maps = self._factor_maps(action, elem, field)
        zero = field.from_int(0)
        idx = {n: i for i, n in enumerate(self.factor_names)}
        blocks = []
        for name in self.factor_names:
            src, rows = maps[name]
            blocks.append(mat_vec(rows, pt.blocks[idx[src]], zero))
        return Point(tuple(blocks))

    def fixed_locus(self, action, elem, field=QZ9) -> PointSet:
        maps = self._factor_maps(action, elem, field)
        zero = field.from_int(0)
        # decompose the "reads from" permutation into cycles
        seen = set()
        cycles = []
        for name in self.factor_names:
            if name in seen:
                continue
            cyc = [name]
            seen.add(name)
            nxt = maps[name][0]
            while nxt != name:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = maps[nxt][0]
            cycles.append(cyc)
        per_cycle = []
        for cyc in cycles:
            comp = maps[cyc[0]][1]
            for name in cyc[1:]:
                comp = mat_mul(comp, maps[name][1], zero)
            options = []
            for _, vec in eigenvectors_2x2(comp, field):
                assignment = {cyc[0]: vec}
                cur = vec
                for prev, name in zip(cyc, cyc[1:]):
                    # blk_prev ~ M_prev . blk_name, so walk with the inverse
                    cur = mat_vec(mat2_inverse(maps[prev][1], field), cur,
                                  zero)
                    assignment[name] = cur
                options.append(assignment)
            per_cycle.append(options)
        points = []
        for combo in itertools.product(*per_cycle):
            assignment = {}
            for part in combo:
                assignment.update(part)
            points.append(Point(tuple(assignment[n]
                                      for n in self.factor_names)))
        return PointSet(tuple(points), field_desc=str(field))

    def lines(self, field=QZ9):
        """The six lines of the bicanonical base locus: two of the three
        affine coordinates both 0 or both infinity."""
        ring = curve_param_ring(field)
        one, zero = field.one, field.from_int(0)
        t0, t1 = ring.var("t0"), ring.var("t1")
        c1, c0 = ring.const(one), ring.const(zero)

        def fixed(at_infinity):
            # (x0,x1) = (1,0) at the affine value 0, (0,1) at infinity
            return (c0, c1) if at_infinity else (c1, c0)

        def curve(name, free, inf):
            images = {}
            for fac in self.factor_names:
                if fac == free:
                    images[fac + "0"], images[fac + "1"] = t0, t1
                else:
                    images[fac + "0"], images[fac + "1"] = fixed(inf)
            return ParametrizedCurve(name, images)

        return [
            curve("L1", free="z", inf=False),
            curve("L2", free="y", inf=False),
            curve("L3", free="x", inf=False),
            curve("L4", free="z", inf=True),
            curve("L5", free="y", inf=True),
            curve("L6", free="x", inf=True),
        ]


# ---------------------------------------------------------------------------
# the flag variety (type B1 ambient)
# ---------------------------------------------------------------------------


class FlagVariety(AmbientThreefold):
    """{x0 y0 + x1 y1 + x2 y2 = 0} in P2 x P2*."""

    label = "B1"

    def __init__(self):
        super().__init__()
        self._ring0 = PolyRing(QZ9, [("x", ("x0", "x1", "x2")),
                                     ("y", ("y0", "y1", "y2"))])
        self._ideals = {}

    def base_ring(self):
        return self._ring0

    def incidence_form(self, field=QZ9):
        ring = self.ring_for(field)
        v = ring.var
        return (v("x0") * v("y0") + v("x1") * v("y1") + v("x2") * v("y2"))

    def _bidegree_monomials(self, ring, m):
        out = []
        for xa in itertools.combinations_with_replacement(range(3), m):
            for ya in itertools.combinations_with_replacement(range(3), m):
                exps = {}
                for i in xa:
                    exps[f"x{i}"] = exps.get(f"x{i}", 0) + 1
                for j in ya:
                    exps[f"y{j}"] = exps.get(f"y{j}", 0) + 1
                out.append(ring.monomial(exps))
        return out

    def ideal_space(self, m, field=QZ9) -> SectionSpace:
        """Echelon basis of (incidence) * H^0(m-1, m-1)."""
        self._check_degree(m)
        key = (m, id(field))
        if key not in self._ideals:
            ring = self.ring_for(field)
            flag = self.incidence_form(field)
            gens = [flag * mono
                    for mono in self._bidegree_monomials(ring, m - 1)]
            self._ideals[key] = row_reduce(gens, ambient=self.label)
        return self._ideals[key]

    def _build_sections(self, m, field):
        ring = self.ring_for(field)
        if m == 0:
            return row_reduce([ring.one()], ambient=self.label)
        ideal = self.ideal_space(m, field)
        leads = {ring.sorted_monomials(b.terms)[0] for b in ideal.basis}
        monos = [mono for mono in self._bidegree_monomials(ring, m)
                 if next(iter(mono.terms)) not in leads]
        return row_reduce(monos, ambient=self.label)

    def normal_form(self, f: Poly) -> Poly:
        if not f:
            return f
        deg = f.multidegree()
        if deg is None or deg[0] != deg[1]:
            raise UnsupportedDegreeError(
                f"normal form needs bidegree (m,m), got {deg}")
        if deg[0] == 0:
            return f
        field = f.ring.field
        return reduce_against(f, self.ideal_space(deg[0], field))

    # -- points ---------------------------------------------------------------

    def point_dict(self, pt: Point):
        (x0, x1, x2), (y0, y1, y2) = pt.blocks
        return {"x0": x0, "x1": x1, "x2": x2, "y0": y0, "y1": y1, "y2": y2}

    def evaluate_section(self, f: Poly, pt: Point):
        return f.evaluate(self.point_dict(pt))

    def on_flag(self, pt: Point):
        x, y = pt.blocks
        acc = x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
        return not acc

    def incident_pencil(self, x, field):
        """Two independent solutions y of x . y = 0."""
        zero, one = field.from_int(0), field.one
        x0, x1, x2 = x
        if x0:
            return (-x1, x0, zero), (-x2, zero, x0)
        if x1:
            return (one, zero, zero), (zero, -x2, x1)
        return (one, zero, zero), (zero, one, zero)

    def plane_points(self, field):
        zero, one = field.from_int(0), field.one
        for a in field.elements():
            for b in field.elements():
                yield (one, a, b)
        for a in field.elements():
            yield (zero, one, a)
        yield (zero, zero, one)

    def enumerate_points(self, field):
        zero, one = field.from_int(0), field.one
        for x in self.plane_points(field):
            u, v = self.incident_pencil(x, field)
            for s in field.elements():
                y = tuple(a + s * b for a, b in zip(u, v))
                yield Point((x, y))
            yield Point((x, v))

    def _matrices(self, action, elem, field):
        ring = self.ring_for(field)
        rule = element_rule_in(action, elem, ring)
        _, mx = linear_block_matrix(ring, rule, ("x0", "x1", "x2"))
        _, my = linear_block_matrix(ring, rule, ("y0", "y1", "y2"))
        return mx, my

    def point_image(self, action, elem, pt: Point, field=QZ9):
        mx, my = self._matrices(action, elem, field)
        zero = field.from_int(0)
        return Point((mat_vec(mx, pt.blocks[0], zero),
                      mat_vec(my, pt.blocks[1], zero)))

    def fixed_locus(self, action, elem, field=QZ9) -> PointSet:
        mx, my = self._matrices(action, elem, field)
        zero = field.from_int(0)
        xs = eigenvectors_3x3(mx, field)
        ys = eigenvectors_3x3(my, field)
        points = []
        for _, v in xs:
            for _, w in ys:
                if not sum((a * b for a, b in zip(v, w)), zero):
                    points.append(Point((v, w)))
        return PointSet(tuple(points), field_desc=str(field))

    def stabilized_plane_points(self, action, field=QZ9):
        """All points of P2 fixed by some nontrivial group element: the
        eigenvector points of every nontrivial element's x-matrix."""
        seen = []
        for elem in action.group.elements():
            if elem == action.group.identity():
                continue
            mx, _ = self._matrices(action, elem, field)
            for _, v in eigenvectors_3x3(mx, field):
                v = normalize_tuple(v)
                if v not in seen:
                    seen.append(v)
        return seen


# ---------------------------------------------------------------------------
# the cone over the sextic Del Pezzo surface (type B2 ambient)
# ---------------------------------------------------------------------------


#: embedding-coordinate labels in canonical order; (0,1) is the cone variable
CONE_LABELS = ((0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2))


class DelPezzoCone(AmbientThreefold):
    """Cone over the blowup Sigma of P2 at the three coordinate points,
    modeled on the parameter ring (x0, x1, x2; z) with weight 3 on z."""

    label = "B2"

    def __init__(self):
        super().__init__()
        self._ring0 = PolyRing(
            QZ9, [VariableBlock("xz", ("x0", "x1", "x2", "z"), (1, 1, 1, 3))])
        self._coords = {}

    def base_ring(self):
        return self._ring0

    def base_points(self, field=QZ9):
        zero, one = field.from_int(0), field.one
        return ((one, zero, zero), (zero, one, zero), (zero, zero, one))

    # -- section spaces -------------------------------------------------------

    def sigma_monomials(self, i, field):
        """Monomial basis of H^0(O_Sigma(i)): degree-3i forms vanishing to
        order >= i at the three coordinate points, by kernel computation on
        the order-(i-1) jet conditions at each point."""
        ring = self.ring_for(field)
        monos = []
        for a in range(3 * i + 1):
            for b in range(3 * i + 1 - a):
                monos.append((a, b, 3 * i - a - b))
        if i == 0:
            return [ring.monomial({})]
        rows = []
        zero, one = field.from_int(0), field.one
        for k in range(3):
            others = [t for t in range(3) if t != k]
            # jet of order < i at the k-th coordinate point: one condition per
            # monomial of low degree in the two local coordinates
            low = sorted({(m[others[0]], m[others[1]]) for m in monos
                          if m[others[0]] + m[others[1]] < i})
            for jet in low:
                row = []
                for m in monos:
                    hit = (m[others[0]], m[others[1]]) == jet
                    row.append(one if hit else zero)
                rows.append(row)
        kernel = linalg.kernel_basis(rows, len(monos), one, zero)
        out = []
        for vec in kernel:
            f = ring.zero()
            for coeff, (a, b, c) in zip(vec, monos):
                if coeff:
                    f = f + ring.monomial({"x0": a, "x1": b, "x2": c}, coeff)
            out.append(f)
        return out

    def _build_sections(self, m, field):
        ring = self.ring_for(field)
        polys = []
        for e in range(m + 1):
            i = m - e
            zpow = ring.monomial({"z": e}) if e else ring.one()
            for g in self.sigma_monomials(i, field):
                polys.append(zpow * g)
        return row_reduce(polys, ambient=self.label)

    # -- the embedding coordinates -------------------------------------------

    def coordinate_sections(self, field=QZ9):
        """Degree-1 sections z_(i,j): the cone variable for (0,1) and the
        seven cubics of the Del Pezzo embedding, labeled by the characters
        chi_1^i chi_2^j of the twisted action."""
        key = id(field)
        if key not in self._coords:
            ring = self.ring_for(field)
            one = field.one
            w = field.omega
            w2 = w * w

            def cyc3(exps, coeffs):
                out = ring.zero()
                for k, c in enumerate(coeffs):
                    out = out + ring.monomial(
                        {f"x{(i + k) % 3}": e
                         for i, e in enumerate(exps) if e}, c)
                return out

            self._coords[key] = {
                (0, 1): ring.var("z"),
                (1, 2): cyc3((2, 1, 0), (one, one, one)),
                (2, 2): cyc3((1, 2, 0), (one, one, one)),
                (1, 1): cyc3((2, 1, 0), (one, w, w2)),
                (2, 1): cyc3((1, 2, 0), (one, w, w2)),
                (1, 0): cyc3((2, 1, 0), (one, w2, w)),
                (2, 0): cyc3((1, 2, 0), (one, w2, w)),
                (0, 2): cyc3((1, 1, 1), (one,)),
            }
        return self._coords[key]

    # -- evaluation -----------------------------------------------------------

    def evaluate_section(self, f: Poly, pt: ConePoint):
        ring = f.ring
        field = ring.field
        zero = field.from_int(0)
        deg = f.multidegree()
        if deg is None:
            raise UnsupportedDegreeError("inhomogeneous section")
        m = deg[0] // 3
        iz = ring.var_index["z"]
        if pt.kind == "vertex":
            return f.terms.get(tuple(0 if k != iz else m
                                     for k in range(ring.nvars)), zero)
        if pt.kind == "plane":
            point = {"x0": pt.x[0], "x1": pt.x[1], "x2": pt.x[2], "z": pt.z}
            return f.evaluate(point)
        others = [t for t in range(3) if t != pt.center]
        ix = [ring.var_index[f"x{t}"] for t in range(3)]
        acc = zero
        for mono, c in f.terms.items():
            e = mono[iz]
            i = m - e
            s = mono[ix[others[0]]] + mono[ix[others[1]]]
            if s < i:
                raise ValueError(
                    "section does not vanish to the required order at the "
                    "blown-up point")
            if s > i:
                continue
            val = c
            if e:
                val = val * pt.z ** e
            a, b = pt.direction
            ea, eb = mono[ix[others[0]]], mono[ix[others[1]]]
            if ea:
                val = val * a ** ea
            if eb:
                val = val * b ** eb
            acc = acc + val
        return acc

    def sigma_only(self, pt: ConePoint, z):
        """Same surface point with a different fiber value."""
        if pt.kind == "vertex":
            raise ValueError("vertex has no fiber coordinate")
        if pt.kind == "plane":
            return ConePoint("plane", x=pt.x, z=z)
        return ConePoint("exceptional", center=pt.center,
                         direction=pt.direction, z=z)

    def p7_vector(self, pt: ConePoint, field=QZ9):
        """Normalized embedding-coordinate 8-tuple (order CONE_LABELS)."""
        coords = self.coordinate_sections(field)
        vals = [self.evaluate_section(coords[lab], pt) if pt.kind != "vertex"
                else (field.one if lab == (0, 1) else field.from_int(0))
                for lab in CONE_LABELS]
        return normalize_tuple(vals)

    # -- enumeration ----------------------------------------------------------

    def sigma_points(self, field):
        zero, one = field.from_int(0), field.one
        base = set(self.base_points(field))
        for a in field.elements():
            for b in field.elements():
                x = (one, a, b)
                if x not in base:
                    yield ConePoint("plane", x=x, z=zero)
        for a in field.elements():
            x = (zero, one, a)
            if x not in base:
                yield ConePoint("plane", x=x, z=zero)
        # (0,0,1) is a base point, so nothing else from the plane
        for k in range(3):
            for a in field.elements():
                yield ConePoint("exceptional", center=k, direction=(one, a),
                                z=zero)
            yield ConePoint("exceptional", center=k, direction=(zero, one),
                            z=zero)

    def enumerate_points(self, field):
        yield ConePoint("vertex")
        for s in self.sigma_points(field):
            for z in field.elements():
                yield self.sigma_only(s, z)

    # -- group action on points ----------------------------------------------

    def _x_matrix(self, action, elem, field):
        ring = self.ring_for(field)
        rule = element_rule_in(action, elem, ring)
        _, rows = linear_block_matrix(ring, rule, ("x0", "x1", "x2"),
                                      src_vars=("x0", "x1", "x2"))
        zimg = rule["z"]
        zc = zimg.coefficient({"z": 1})
        if zimg != ring.var("z") * zc:
            raise StructureError("cone variable must map to a multiple of z")
        return rows, zc

    def _sigma_image(self, rows, pt: ConePoint, field):
        """Image of the underlying Sigma point under the x-matrix (structure
        only; fiber values are recovered from the embedding coordinates)."""
        zero = field.from_int(0)
        if pt.kind == "plane":
            return ConePoint("plane", x=mat_vec(rows, pt.x, zero), z=zero)
        e = [zero] * 3
        e[pt.center] = field.one
        img_center_vec = normalize_tuple(mat_vec(rows, tuple(e), zero))
        centers = {c: k for k, c in enumerate(self.base_points(field))}
        if img_center_vec not in centers:
            raise StructureError(
                "blown-up point not mapped to a blown-up point")
        new_center = centers[img_center_vec]
        others = [t for t in range(3) if t != pt.center]
        d = [zero] * 3
        d[others[0]], d[others[1]] = pt.direction
        dimg = mat_vec(rows, tuple(d), zero)
        new_others = [t for t in range(3) if t != new_center]
        if dimg[new_center]:
            raise StructureError("direction image leaves the tangent plane")
        return ConePoint("exceptional", center=new_center,
                         direction=(dimg[new_others[0]], dimg[new_others[1]]),
                         z=zero)

    def point_image(self, action, elem, pt: ConePoint, field=QZ9):
        if pt.kind == "vertex":
            return pt
        rows, _ = self._x_matrix(action, elem, field)
        img_sigma = self._sigma_image(rows, pt, field)
        # fiber value: match the embedding coordinates.  The point (s, z)
        # maps to a point over img_sigma whose coordinate vector is the
        # componentwise character transform of (z, v(s)).
        from .group import Character
        vec = [self.evaluate_section(c, self.sigma_only(pt, pt.z))
               for c in self.coordinate_sections(field).values()]
        labels = list(self.coordinate_sections(field))
        tw2 = Character(action.group, (0, 2)).value(elem, field)
        factors = [Character(action.group, lab).value(elem, field)
                   for lab in labels]
        # sections of x-degree 3 pick up the inverse twist when moving from
        # the section transform to the point transform
        img_vec = {}
        for lab, fac, val in zip(labels, factors, vec):
            scale = fac if lab == (0, 1) else fac * tw2 ** (-1)
            img_vec[lab] = scale * val
        # ratio against the structural Sigma image gives the fiber value
        sig_vals = {lab: self.evaluate_section(
            sec, img_sigma) for lab, sec in
            self.coordinate_sections(field).items() if lab != (0, 1)}
        rho = None
        for lab, sv in sig_vals.items():
            if sv:
                rho = img_vec[lab] * sv ** (-1)
                break
        if rho is None:
            raise StructureError("degenerate embedding vector")
        newz = img_vec[(0, 1)] * rho ** (-1)
        return self.sigma_only(img_sigma, newz)

    # -- fixed loci -----------------------------------------------------------

    def fixed_locus(self, action, elem, field=QZ9) -> PointSet:
        from .group import Character
        rows, _ = self._x_matrix(action, elem, field)
        zero, one = field.from_int(0), field.one
        fixed_sigma = []
        if is_diagonal(rows):
            diag = [rows[i][i] for i in range(3)]
            if len(set(diag)) != 3:
                raise InfiniteFixedLocusError(
                    "repeated eigenvalue of a diagonal element")
            # P2-fixed points are the blown-up points; on Sigma the fixed
            # points are the tangent eigen-directions, i.e. the hexagon
            # vertices
            for k in range(3):
                others = [t for t in range(3) if t != k]
                if diag[others[0]] == diag[others[1]]:
                    raise InfiniteFixedLocusError(
                        "exceptional line fixed pointwise")
                fixed_sigma.append(ConePoint(
                    "exceptional", center=k, direction=(one, zero), z=zero))
                fixed_sigma.append(ConePoint(
                    "exceptional", center=k, direction=(zero, one), z=zero))
        else:
            centers = set(self.base_points(field))
            for _, v in eigenvectors_3x3(rows, field):
                v = normalize_tuple(v)
                if v in centers:
                    raise StructureError(
                        "eigenvector at a blown-up point for a "
                        "non-diagonal element")
                fixed_sigma.append(ConePoint("plane", x=v, z=zero))
        points = [ConePoint("vertex")]
        coords = self.coordinate_sections(field)
        for s in fixed_sigma:
            # the vertex-line through s is pointwise fixed iff the twisted
            # characters agree on all nonzero embedding coordinates of s and
            # that common value is 1
            lam = None
            for lab, sec in coords.items():
                if lab == (0, 1):
                    continue
                val = self.evaluate_section(sec, s)
                if val:
                    cv = Character(action.group, lab).value(elem, field)
                    if lam is None:
                        lam = cv
                    elif lam != cv:
                        raise StructureError(
                            "fixed Sigma point with incoherent eigenvalues")
            if lam is None:
                raise StructureError("degenerate Sigma point")
            # the ruling through s carries the weights (chi2 : chi2^(-2) lam)
            # so it is pointwise fixed exactly when lam is trivial
            if lam == one:
                raise InfiniteFixedLocusError("a ruling is fixed pointwise")
            points.append(s)
        return PointSet(tuple(points), field_desc=str(field))

    # -- the six lines of Sigma and the hexagon -------------------------------

    def sigma_lines(self, field=QZ9):
        """The six lines of Sigma as P1-parametrizations of their embedding
        coordinates (labels as in CONE_LABELS, without the cone variable)."""
        ring = curve_param_ring(field)
        coords = self.coordinate_sections(field)
        xr = self.ring_for(field)
        out = []
        # strict transforms of the coordinate lines {x_k = 0}: substitute the
        # two surviving coordinates and cancel the common factor, which is
        # the product of the two local parameters
        for k in range(3):
            others = [t for t in range(3) if t != k]
            sub = {f"x{k}": 0,
                   f"x{others[0]}": ring.var("t0"),
                   f"x{others[1]}": ring.var("t1")}
            images = {}
            for lab, sec in coords.items():
                if lab == (0, 1):
                    continue
                img = sec.substitute(sub)
                images[lab] = _divide_binary(img, "t0", "t1")
            out.append(ParametrizedCurve(f"line_x{k}", images))
        # exceptional lines: first-order coefficients along x = e_k + t*d
        for k in range(3):
            images = {}
            for lab, sec in coords.items():
                if lab == (0, 1):
                    continue
                images[lab] = self._exceptional_linear(sec, k, ring)
            out.append(ParametrizedCurve(f"line_e{k}", images))
        return out

    def _exceptional_linear(self, sec, k, pring):
        """First-order part of a cubic along x = e_k + t*(t0, t1 slots)."""
        ring = sec.ring
        others = [t for t in range(3) if t != k]
        ix = [ring.var_index[f"x{t}"] for t in range(3)]
        out = pring.zero()
        for mono, c in sec.terms.items():
            ea, eb = mono[ix[others[0]]], mono[ix[others[1]]]
            if ea + eb != 1:
                continue
            out = out + pring.monomial({"t0": ea, "t1": eb}, c)
        return out

    def hexagon_vertices(self, field=QZ9):
        """The six pairwise intersection points of the six lines, as cone
        points with fiber value 0 (the tangent eigen-directions at the three
        blown-up points)."""
        zero, one = field.from_int(0), field.one
        pts = []
        for k in range(3):
            pts.append(ConePoint("exceptional", center=k,
                                 direction=(one, zero), z=zero))
            pts.append(ConePoint("exceptional", center=k,
                                 direction=(zero, one), z=zero))
        return pts

    def line_intersections(self, field=QZ9):
        """Pairwise intersections of the six lines computed from the
        parametrizations, as normalized 7-vectors (labels sans cone)."""
        lines = self.sigma_lines(field)
        labels = [lab for lab in CONE_LABELS if lab != (0, 1)]
        zero, one = field.from_int(0), field.one
        found = []
        for a in range(len(lines)):
            for b in range(a + 1, len(lines)):
                pa = _line_span(lines[a], labels, field)
                pb = _line_span(lines[b], labels, field)
                inter = _span_intersection(pa, pb, field)
                if inter is None:
                    continue
                found.append((lines[a].name, lines[b].name,
                              normalize_tuple(inter)))
        return found

    def restrict_to_ruling(self, f: Poly, sigma_pt: ConePoint, field=None):
        """Binary form of the section on the ruling through the vertex and
        the given Sigma point: sum over z-degree e of (value of the
        Sigma-component) t1^e t0^(m-e)."""
        ring = f.ring
        field = field or ring.field
        pring = curve_param_ring(field)
        deg = f.multidegree()[0] // 3
        iz = ring.var_index["z"]
        one = field.one
        out = pring.zero()
        probe = self.sigma_only(sigma_pt, one)
        for e in range(deg + 1):
            comp = Poly(ring, {m: c for m, c in f.terms.items()
                               if m[iz] == e})
            if not comp:
                continue
            val = self.evaluate_section(comp, probe)
            if val:
                out = out + pring.monomial({"t0": deg - e, "t1": e}, val)
        return out


def _divide_binary(f: Poly, t0: str, t1: str) -> Poly:
    """Divide a binary form by t0*t1 (must divide exactly)."""
    ring = f.ring
    i0, i1 = ring.var_index[t0], ring.var_index[t1]
    out = {}
    for m, c in f.terms.items():
        if m[i0] < 1 or m[i1] < 1:
            raise ValueError("binary form not divisible by the parameters")
        mm = list(m)
        mm[i0] -= 1
        mm[i1] -= 1
        out[tuple(mm)] = c
    return Poly(ring, out)


def _line_span(curve: ParametrizedCurve, labels, field):
    """The two endpoint coordinate vectors spanning a parametrized line."""
    p = []
    for endpoint in ({"t0": 1, "t1": 0}, {"t0": 0, "t1": 1}):
        vec = []
        for lab in labels:
            img = curve.images[lab]
            if isinstance(img, Poly):
                point = {v: field.from_int(endpoint[v])
                         for v in ("t0", "t1")}
                vec.append(img.evaluate(point))
            else:
                vec.append(field.from_int(img))
        p.append(tuple(vec))
    return p


def _span_intersection(pa, pb, field):
    """One-dimensional intersection of two 2-dim coordinate subspaces, or
    None; raises if the intersection has dimension > 1."""
    zero, one = field.from_int(0), field.one
    n = len(pa[0])
    # solve alpha*pa0 + beta*pa1 - gamma*pb0 - delta*pb1 = 0
    rows = [[pa[0][i], pa[1][i], -pb[0][i], -pb[1][i]] for i in range(n)]
    ker = linalg.kernel_basis(rows, 4, one, zero)
    if not ker:
        return None
    if len(ker) > 1:
        raise ValueError("coincident lines")
    alpha, beta, _, _ = ker[0]
    return tuple(alpha * a + beta * b for a, b in zip(pa[0], pa[1]))


def jacobian_screen(W: AmbientThreefold, f: Poly, field):
    """Smoothness screen for the surface {f = 0} in W over a finite field.

    Delegates to the vectorized enumeration screens: every F_q-point of the
    surface is tested against the Jacobian criterion in a local chart.  The
    report holds the point count, the singular witnesses (empty when the
    screen is clean), and a "clean" flag.
    """
    if not f:
        raise StructureError("cannot screen the zero section")
    from . import screens
    vf = screens.vec_field_for(field)
    fq = W.specialize(f, field)
    if W.label == "A":
        rep = screens.segre_jacobian(fq, vf)
    elif W.label == "B1":
        rep = screens.flag_jacobian(fq, W.incidence_form(field), vf)
    else:
        chart_ring = PolyRing(field, [("c", ("t", "u", "z"))])
        rep = screens.cone_jacobian(fq, chart_ring, vf)
    rep.setdefault("clean", not rep["singular"])
    return rep
