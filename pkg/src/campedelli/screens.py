"""Vectorized finite-field enumeration screens.

Everything here is evidence-grade: surfaces are screened for smoothness by
the Jacobian criterion at every F_q-point, base loci are intersected by brute
force, and fixed-point counts are recomputed by exhaustive enumeration.  The
exact certificates live in the symbolic modules; these screens confirm them
over several primes (and one quadratic extension) at array speed.

Field elements are numpy int64 arrays reduced mod p; F_{p^2} elements are
(a, b) pairs of such arrays with s^2 = n for the smallest non-residue n.
"""

from __future__ import annotations

import itertools

import numpy as np

from .scalars import PrimeField, QuadraticExtField

CHUNK = 1 << 21


class VecFp:
    """Vectorized arithmetic in F_p; values are int64 arrays (or ints)."""

    def __init__(self, field: PrimeField):
        self.field = field
        self.p = field.p
        self.q = field.p

    def element(self, idx):
        return np.asarray(idx, dtype=np.int64) % self.p

    def const(self, c):
        return int(c.value) if hasattr(c, "value") else int(c) % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def pow(self, x, e):
        out = 1
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def is_zero(self, x):
        return np.asarray(x) % self.p == 0

    def coords_at(self, x, i):
        return int(np.asarray(x).reshape(-1)[i])


class VecFp2:
    """Vectorized arithmetic in F_{p^2}; values are (a, b) pairs."""

    def __init__(self, field: QuadraticExtField):
        self.field = field
        self.p = field.p
        self.n = field.n
        self.q = field.p * field.p

    def _pair(self, x):
        if isinstance(x, tuple):
            return x
        return (x, 0)

    def element(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return (idx % self.p, idx // self.p)

    def const(self, c):
        if hasattr(c, "a"):
            return (int(c.a), int(c.b))
        if hasattr(c, "value"):
            return (int(c.value), 0)
        return (int(c) % self.p, 0)

    def add(self, x, y):
        (a, b), (c, d) = self._pair(x), self._pair(y)
        return ((a + c) % self.p, (b + d) % self.p)

    def sub(self, x, y):
        (a, b), (c, d) = self._pair(x), self._pair(y)
        return ((a - c) % self.p, (b - d) % self.p)

    def mul(self, x, y):
        (a, b), (c, d) = self._pair(x), self._pair(y)
        return ((a * c + b * d * self.n) % self.p, (a * d + b * c) % self.p)

    def neg(self, x):
        a, b = self._pair(x)
        return ((-a) % self.p, (-b) % self.p)

    def pow(self, x, e):
        out = (1, 0)
        base = self._pair(x)
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def is_zero(self, x):
        a, b = self._pair(x)
        return (np.asarray(a) % self.p == 0) & (np.asarray(b) % self.p == 0)

    def coords_at(self, x, i):
        a, b = self._pair(x)
        return (int(np.asarray(a).reshape(-1)[i]),
                int(np.asarray(b).reshape(-1)[i]))


def vec_field_for(field):
    if isinstance(field, QuadraticExtField):
        return VecFp2(field)
    return VecFp(field)


def poly_values(f, assign, vf):
    """Evaluate a polynomial over F_p on vectorized coordinate assignments.

    ``f`` must have PrimeField coefficients (the prime of vf); ``assign``
    maps variable names to vectorized field values.
    """
    ring = f.ring
    pows = {}
    acc = None
    for mono, c in f.terms.items():
        term = vf.const(c)
        for i, e in enumerate(mono):
            if e:
                key = (ring.variables[i], e)
                if key not in pows:
                    pows[key] = vf.pow(assign[ring.variables[i]], e)
                term = vf.mul(term, pows[key])
        acc = term if acc is None else vf.add(acc, term)
    if acc is None:
        return 0 if isinstance(vf, VecFp) else (0, 0)
    return acc


def grid_chunks(vf, names, chunk=CHUNK):
    """Full product grid over the listed free coordinates, in flat chunks."""
    nfree = len(names)
    total = vf.q ** nfree
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        out = {}
        for k, nm in enumerate(names):
            out[nm] = vf.element((idx // vf.q ** (nfree - 1 - k)) % vf.q)
        yield out, len(idx)


# ---------------------------------------------------------------------------
# (P1)^3 screens
# ---------------------------------------------------------------------------

SEGRE_FACTORS = ("x", "y", "z")


def segre_groups(vf, chunk=CHUNK):
    """All points of (P1)^3 grouped by which factors sit at infinity.

    Yields (pattern, coords, size); pattern[i] = 1 means factor i is the
    point (0:1), otherwise the factor is (1:t) with t free.
    """
    for pattern in itertools.product((0, 1), repeat=3):
        free = [SEGRE_FACTORS[i] + "1" for i in range(3) if pattern[i] == 0]
        for grid, size in grid_chunks(vf, free, chunk):
            coords = {}
            for i, fac in enumerate(SEGRE_FACTORS):
                if pattern[i]:
                    coords[fac + "0"] = 0
                    coords[fac + "1"] = 1
                else:
                    coords[fac + "0"] = 1
                    coords[fac + "1"] = grid[fac + "1"]
            yield pattern, coords, size


def _mask_any(vf, polys, coords, size):
    """Boolean array: some listed polynomial is nonzero at the point."""
    alive = np.zeros(size, dtype=bool)
    for f in polys:
        alive |= ~vf.is_zero(poly_values(f, coords, vf)) & np.ones(size, bool)
        if alive.all():
            break
    return alive


def segre_common_zeros(polys, vf, max_witnesses=5):
    """Count the common zeros of the given sections on (P1)^3(F_q)."""
    count = 0
    witnesses = []
    for pattern, coords, size in segre_groups(vf):
        dead = ~_mask_any(vf, polys, coords, size)
        k = int(dead.sum())
        count += k
        if k and len(witnesses) < max_witnesses:
            idx = np.flatnonzero(dead)[:max_witnesses - len(witnesses)]
            for i in idx:
                witnesses.append(_extract_point(vf, coords, int(i),
                                                ("x0", "x1", "y0", "y1",
                                                 "z0", "z1")))
    return count, witnesses


def _extract_point(vf, coords, i, names):
    out = []
    for nm in names:
        v = coords[nm]
        if isinstance(v, (int, tuple)) and not isinstance(v, np.ndarray):
            out.append(v if not isinstance(v, tuple) else v)
        else:
            out.append(vf.coords_at(v, i))
    return tuple(out)


def segre_quadric_locus(quads, vf):
    """Compare the common zero locus of the bicanonical quadrics with the
    union of the six coordinate lines (both factors 0, or both infinity)."""
    zeros = 0
    on_lines = 0
    mismatches = 0
    witnesses = []
    for pattern, coords, size in segre_groups(vf):
        dead = ~_mask_any(vf, quads, coords, size)
        at0 = {}
        atinf = {}
        for i, fac in enumerate(SEGRE_FACTORS):
            if pattern[i]:
                at0[fac] = np.zeros(size, dtype=bool)
                atinf[fac] = np.ones(size, dtype=bool)
            else:
                at0[fac] = np.asarray(vf.is_zero(coords[fac + "1"])) \
                    & np.ones(size, bool)
                atinf[fac] = np.zeros(size, dtype=bool)
        line = np.zeros(size, dtype=bool)
        for a, b in itertools.combinations(SEGRE_FACTORS, 2):
            line |= at0[a] & at0[b]
            line |= atinf[a] & atinf[b]
        zeros += int(dead.sum())
        on_lines += int(line.sum())
        bad = dead ^ line
        mismatches += int(bad.sum())
        if bad.any() and len(witnesses) < 5:
            for i in np.flatnonzero(bad)[:5 - len(witnesses)]:
                witnesses.append(_extract_point(vf, coords, int(i),
                                                ("x0", "x1", "y0", "y1",
                                                 "z0", "z1")))
    return {"zeros": zeros, "line_points": on_lines,
            "mismatches": mismatches, "witnesses": witnesses}


# ---------------------------------------------------------------------------
# tensor evaluation on full coordinate grids
# ---------------------------------------------------------------------------


def _compose_chart(f, images, chart_ring):
    """Substitute chart-local polynomial images into f (no homogeneity
    bookkeeping: chart polynomials are affine)."""
    ring = f.ring
    out = chart_ring.zero()
    for m, c in f.terms.items():
        term = chart_ring.const(c)
        for i, e in enumerate(m):
            if e:
                term = term * images[ring.variables[i]] ** e
        out = out + term
    return out


def _coeff_tensor(g, names, vf):
    """Coefficient tensor of a chart-local polynomial (component arrays)."""
    ring = g.ring
    allowed = set(names)
    for v in g.used_variables():
        if v not in allowed:
            raise ValueError(f"unexpected variable {v} in chart polynomial")
    idxs = [ring.var_index[v] for v in names]
    shape = tuple(max((m[i] for m in g.terms), default=0) + 1 for i in idxs)
    comps = 1 if isinstance(vf, VecFp) else 2
    out = [np.zeros(shape, dtype=np.int64) for _ in range(comps)]
    for m, c in g.terms.items():
        cv = vf.const(c)
        pos = tuple(m[i] for i in idxs)
        if comps == 1:
            out[0][pos] = cv
        else:
            out[0][pos], out[1][pos] = cv
    return tuple(out)


def _axis_powers(vf, deg):
    """Component arrays of element(idx)^e for e = 0..deg, idx = 0..q-1."""
    vals = vf.element(np.arange(vf.q, dtype=np.int64))
    rows = [vf.element(np.ones(vf.q, dtype=np.int64))]
    for _ in range(deg):
        rows.append(vf.mul(rows[-1], vals))
    if isinstance(vf, VecFp):
        return (np.stack(rows),)
    return (np.stack([r[0] for r in rows]),
            np.stack([r[1] for r in rows]))


def _contract_axis0(vf, tensor, powers):
    """Contract the leading coefficient axis against a powers matrix; the
    new grid axis lands at the end."""
    if isinstance(vf, VecFp):
        return (np.tensordot(tensor[0], powers[0], axes=([0], [0])) % vf.p,)
    rr = np.tensordot(tensor[0], powers[0], axes=([0], [0]))
    ii = np.tensordot(tensor[1], powers[1], axes=([0], [0]))
    ri = np.tensordot(tensor[0], powers[1], axes=([0], [0]))
    ir = np.tensordot(tensor[1], powers[0], axes=([0], [0]))
    return ((rr + vf.n * ii) % vf.p, (ri + ir) % vf.p)


def tensor_zero_indices(g, names, vf):
    """Global flat indices (row-major over names, matching grid_chunks)
    where g vanishes on the full coordinate grid."""
    q = vf.q
    n = len(names)
    if n == 0:
        v = poly_values(g, {}, vf)
        return np.arange(1) if bool(np.all(vf.is_zero(v))) else np.arange(0)
    coeff = _coeff_tensor(g, names, vf)
    degs = [s - 1 for s in coeff[0].shape]
    pows = [_axis_powers(vf, d) for d in degs]
    outer = max(1, (1 << 22) // max(1, q ** (n - 1)))
    hits = []
    for lo in range(0, q, outer):
        hi = min(q, lo + outer)
        head = tuple(comp[:, lo:hi] for comp in pows[0])
        cur = _contract_axis0(vf, coeff, head)
        for k in range(1, n):
            cur = _contract_axis0(vf, cur, pows[k])
        if isinstance(vf, VecFp):
            mask = cur[0].reshape(-1) == 0
        else:
            mask = (cur[0].reshape(-1) == 0) & (cur[1].reshape(-1) == 0)
        idx = np.flatnonzero(mask)
        if idx.size:
            hits.append(idx + lo * q ** (n - 1))
    if not hits:
        return np.arange(0)
    return np.concatenate(hits)


def grid_coords_at(vf, names, idx):
    """Coordinate arrays of global flat grid indices."""
    q = vf.q
    n = len(names)
    return {nm: vf.element((idx // q ** (n - 1 - k)) % q)
            for k, nm in enumerate(names)}


def segre_jacobian(f, vf):
    """Smoothness screen for {f = 0} in (P1)^3 over F_q.

    Surface points are located chart by chart with tensor evaluation; at
    each one the three gradient components (the partials with respect to
    the free coordinate of each factor) must not all vanish.
    """
    ring = f.ring
    partials = {v: f.derivative(v) for v in ring.variables}
    on_surface = 0
    singular = []
    for pattern in itertools.product((0, 1), repeat=3):
        sub = {}
        fixed = {}
        free = []
        for i, fac in enumerate(SEGRE_FACTORS):
            if pattern[i]:
                sub[fac + "0"], sub[fac + "1"] = 0, 1
                fixed[fac + "0"], fixed[fac + "1"] = 0, 1
            else:
                sub[fac + "0"] = 1
                sub[fac + "1"] = ring.var(fac + "1")
                fixed[fac + "0"] = 1
                free.append(fac + "1")
        g = f.substitute(sub)
        idx = tensor_zero_indices(g, free, vf)
        k = idx.size
        if not k:
            continue
        on_surface += k
        coords = dict(fixed)
        coords.update(grid_coords_at(vf, free, idx))
        sing = np.ones(k, dtype=bool)
        for i, fac in enumerate(SEGRE_FACTORS):
            # points (1:t) live in the chart where the first coordinate is 1
            var = fac + ("0" if pattern[i] else "1")
            sing &= vf.is_zero(poly_values(partials[var], coords, vf)) \
                & np.ones(k, bool)
        if sing.any():
            for i in np.flatnonzero(sing)[:5]:
                singular.append(_extract_point(vf, coords, int(i),
                                               ("x0", "x1", "y0", "y1",
                                                "z0", "z1")))
    return {"on_surface": on_surface, "singular": singular}


def count_fixed_segre(factor_maps, vf):
    """Number of (P1)^3(F_q)-points fixed by the element whose per-factor
    structure is factor_maps[name] = (source factor, 2x2 integer matrix)."""
    count = 0
    for pattern, coords, size in segre_groups(vf):
        fixed = np.ones(size, dtype=bool)
        for fac in SEGRE_FACTORS:
            src, m = factor_maps[fac]
            s0, s1 = coords[src + "0"], coords[src + "1"]
            img0 = vf.add(vf.mul(m[0][0], s0), vf.mul(m[0][1], s1))
            img1 = vf.add(vf.mul(m[1][0], s0), vf.mul(m[1][1], s1))
            det = vf.sub(vf.mul(coords[fac + "0"], img1),
                         vf.mul(coords[fac + "1"], img0))
            fixed &= vf.is_zero(det) & np.ones(size, bool)
        count += int(fixed.sum())
    return count


# ---------------------------------------------------------------------------
# flag variety screens
# ---------------------------------------------------------------------------


def flag_groups(vf, chunk=CHUNK):
    """All point-line flags of P2 x P2*, grouped by the x-pivot.

    For each plane point x the incident lines form the pencil u + s v (with
    one extra point y = v); x runs over its three pivot strata.
    """
    zero, one = 0, 1
    strata = [
        (0, ("a", "b"), lambda g: (one, g["a"], g["b"])),
        (1, ("a",), lambda g: (zero, one, g["a"])),
        (2, (), lambda g: (zero, zero, one)),
    ]
    for piv, free, build in strata:
        for tail in (("s",), ()):
            for grid, size in grid_chunks(vf, free + tail, chunk):
                x = build(grid)
                u, v = _incident_pencil_vec(vf, piv, x)
                if tail:
                    s = grid["s"]
                    y = tuple(vf.add(u[i], vf.mul(s, v[i])) for i in range(3))
                else:
                    y = v
                coords = {}
                for i in range(3):
                    coords[f"x{i}"] = x[i]
                    coords[f"y{i}"] = y[i]
                yield piv, coords, size


def _incident_pencil_vec(vf, piv, x):
    zero, one = 0, 1
    if piv == 0:
        return ((vf.neg(x[1]), one, zero), (vf.neg(x[2]), zero, one))
    if piv == 1:
        return ((one, zero, zero), (zero, vf.neg(x[2]), one))
    return ((one, zero, zero), (zero, one, zero))


def flag_common_zeros(polys, vf, max_points=200):
    """Common zeros of the given bidegree sections on the flag variety;
    returns raw coordinate tuples (up to max_points) plus the total count."""
    count = 0
    points = []
    for piv, coords, size in flag_groups(vf):
        dead = ~_mask_any(vf, polys, coords, size)
        k = int(dead.sum())
        count += k
        if k and len(points) < max_points:
            for i in np.flatnonzero(dead)[:max_points - len(points)]:
                points.append(_extract_point(
                    vf, coords, int(i),
                    ("x0", "x1", "x2", "y0", "y1", "y2")))
    return count, points


def _flag_chart_images(chart_ring, piv, tail):
    """Chart-local polynomial images of the flag coordinates; the pencil
    parameter s sweeps the incident lines, the tail chart is the line at
    s = infinity."""
    one, zero = chart_ring.one(), chart_ring.zero()
    a, b, s = (chart_ring.var(v) for v in ("a", "b", "s"))
    if piv == 0:
        x = (one, a, b)
        y = (-b, zero, one) if tail else (-a - s * b, one, s)
        names = ("a", "b") if tail else ("a", "b", "s")
    elif piv == 1:
        x = (zero, one, a)
        y = (zero, -a, one) if tail else (one, -(s * a), s)
        names = ("a",) if tail else ("a", "s")
    else:
        x = (zero, zero, one)
        y = (zero, one, zero) if tail else (one, s, zero)
        names = () if tail else ("s",)
    images = {f"x{i}": x[i] for i in range(3)}
    images.update({f"y{i}": y[i] for i in range(3)})
    return images, names


def _flag_chart_coords(vf, piv, tail, grids):
    """Numeric flag coordinates of chart grid points."""
    a = grids.get("a", 0)
    b = grids.get("b", 0)
    s = grids.get("s", 0)
    if piv == 0:
        x = (1, a, b)
        y = (vf.neg(b), 0, 1) if tail \
            else (vf.sub(vf.neg(a), vf.mul(s, b)), 1, s)
    elif piv == 1:
        x = (0, 1, a)
        y = (0, vf.neg(a), 1) if tail else (1, vf.neg(vf.mul(s, a)), s)
    else:
        x = (0, 0, 1)
        y = (0, 1, 0) if tail else (1, s, 0)
    coords = {f"x{i}": x[i] for i in range(3)}
    coords.update({f"y{i}": y[i] for i in range(3)})
    return coords


def flag_jacobian(f, flag, vf):
    """Smoothness screen for {f = 0} on the flag variety over F_q.

    In the chart dehomogenizing x at its pivot and y at its pivot, the
    surface is cut by (f, incidence); it is smooth at a point when the 2x4
    Jacobian in the four local coordinates has rank 2, i.e. some 2x2 minor
    is nonzero.  Surface points are located with tensor evaluation of the
    chart-composed equation.
    """
    from .polyring import PolyRing
    ring = f.ring
    df = {v: f.derivative(v) for v in ring.variables}
    dg = {v: flag.derivative(v) for v in ring.variables}
    chart_ring = PolyRing(ring.field, [("c", ("a", "b", "s"))])
    on_surface = 0
    singular = []
    for xpiv in range(3):
        for tail in (False, True):
            images, names = _flag_chart_images(chart_ring, xpiv, tail)
            g = _compose_chart(f, images, chart_ring)
            idx = tensor_zero_indices(g, names, vf)
            k = idx.size
            if not k:
                continue
            on_surface += k
            grids = grid_coords_at(vf, names, idx)
            sub = _flag_chart_coords(vf, xpiv, tail, grids)
            singular += _flag_singular_points(vf, sub, k, xpiv, df, dg)
    return {"on_surface": on_surface, "singular": singular}


def _flag_singular_points(vf, sub, k, xpiv, df, dg):
    singular = []
    ypiv = _pivot_index(vf, [sub["y0"], sub["y1"], sub["y2"]], k)
    for yj in range(3):
        mask = ypiv == yj
        if not mask.any():
            continue
        pts = {nm: _take(vf, v, mask) for nm, v in sub.items()}
        n = int(mask.sum())
        local = [f"x{i}" for i in range(3) if i != xpiv] \
            + [f"y{j}" for j in range(3) if j != yj]
        rowf = [poly_values(df[v], pts, vf) for v in local]
        rowg = [poly_values(dg[v], pts, vf) for v in local]
        sing = np.ones(n, dtype=bool)
        for a, b in itertools.combinations(range(4), 2):
            minor = vf.sub(vf.mul(rowf[a], rowg[b]),
                           vf.mul(rowf[b], rowg[a]))
            sing &= vf.is_zero(minor) & np.ones(n, bool)
        if sing.any():
            for i in np.flatnonzero(sing)[:5]:
                singular.append(_extract_point(
                    vf, pts, int(i),
                    ("x0", "x1", "x2", "y0", "y1", "y2")))
    return singular


def _subselect(vf, coords, idx):
    out = {}
    for nm, v in coords.items():
        if isinstance(v, np.ndarray):
            out[nm] = v[idx]
        elif isinstance(v, tuple) and isinstance(v[0], np.ndarray):
            out[nm] = (v[0][idx], v[1][idx])
        else:
            out[nm] = v
    return out


def _take(vf, v, mask):
    if isinstance(v, np.ndarray):
        return v[mask]
    if isinstance(v, tuple) and isinstance(v[0], np.ndarray):
        return (v[0][mask], v[1][mask])
    return v


def _pivot_index(vf, comps, size):
    piv = np.full(size, 2, dtype=np.int64)
    nz1 = ~(vf.is_zero(comps[1]) & np.ones(size, bool))
    piv[nz1] = 1
    nz0 = ~(vf.is_zero(comps[0]) & np.ones(size, bool))
    piv[nz0] = 0
    return piv


def count_fixed_flag(mx, my, vf):
    """Number of flags fixed by the element with integer matrices (mx, my)."""
    count = 0
    for piv, coords, size in flag_groups(vf):
        fixed = np.ones(size, dtype=bool)
        for pref, m in (("x", mx), ("y", my)):
            comp = [coords[f"{pref}{i}"] for i in range(3)]
            img = [_mat_row(vf, m[i], comp) for i in range(3)]
            for a, b in ((0, 1), (0, 2), (1, 2)):
                minor = vf.sub(vf.mul(comp[a], img[b]),
                               vf.mul(comp[b], img[a]))
                fixed &= vf.is_zero(minor) & np.ones(size, bool)
        count += int(fixed.sum())
    return count


def _mat_row(vf, row, comp):
    acc = vf.mul(row[0], comp[0])
    acc = vf.add(acc, vf.mul(row[1], comp[1]))
    return vf.add(acc, vf.mul(row[2], comp[2]))


# ---------------------------------------------------------------------------
# Del Pezzo cone screens
# ---------------------------------------------------------------------------


def cone_plane_groups(vf, chunk=CHUNK, with_z=True):
    """Plane-chart points of the cone parameter space, excluding the three
    blown-up points; yields (pivot, coords, keep mask, size)."""
    zero, one = 0, 1
    strata = [
        (0, ("a", "b"), lambda g: (one, g["a"], g["b"]),
         lambda g, n: ~(np.asarray(vf.is_zero(g["a"])) & np.ones(n, bool)
                        & np.asarray(vf.is_zero(g["b"])) & np.ones(n, bool))),
        (1, ("a",), lambda g: (zero, one, g["a"]),
         lambda g, n: ~(np.asarray(vf.is_zero(g["a"])) & np.ones(n, bool))),
    ]
    for piv, free, build, keepf in strata:
        names = free + (("zz",) if with_z else ())
        for grid, size in grid_chunks(vf, names, chunk):
            x = build(grid)
            coords = {"x0": x[0], "x1": x[1], "x2": x[2]}
            if with_z:
                coords["z"] = grid["zz"]
            yield piv, coords, keepf(grid, size), size


def cone_blowup_chart(f, chart_ring, center, half):
    """Local equation of a cone section on the blowup chart at one of the
    three centers; chart coordinates (t, u, z) with x_center = 1 and the
    other two coordinates (t, t*u) (half 0) or (t*u, t) (half 1)."""
    ring = f.ring
    iz = ring.var_index["z"]
    ix = [ring.var_index[f"x{t}"] for t in range(3)]
    others = [t for t in range(3) if t != center]
    out = {}
    for mono, c in f.terms.items():
        e = mono[iz]
        ea, eb = mono[ix[others[0]]], mono[ix[others[1]]]
        # the required vanishing order at the center is i = m - e
        m = (mono[ix[0]] + mono[ix[1]] + mono[ix[2]] + 3 * e) // 3
        i = m - e
        texp = ea + eb - i
        if texp < 0:
            raise ValueError("section without the required vanishing order")
        uexp = eb if half == 0 else ea
        key = (texp, uexp, e)
        prev = out.get(key)
        out[key] = c if prev is None else prev + c
    from .polyring import Poly
    return Poly(chart_ring, out)


def cone_jacobian(f, chart_ring, vf):
    """Smoothness screen for a cubic cone section over F_q.

    Plane charts (x_k = 1) cover everything away from the exceptional lines
    and the vertex; the six blowup chart halves cover the exceptional points
    at t = 0; the vertex is checked by nonvanishing of the z^3 coefficient.
    """
    ring = f.ring
    report = {"on_surface": 0, "singular": [], "vertex_on_surface": False}
    # vertex
    vmono = [0] * ring.nvars
    vmono[ring.var_index["z"]] = 3
    if vf.is_zero(vf.const(f.terms.get(tuple(vmono), 0) or 0)):
        report["vertex_on_surface"] = True
        report["singular"].append("vertex")
    # plane charts (tensor evaluation over the affine grid)
    partials = {v: f.derivative(v) for v in ring.variables}
    from .polyring import PolyRing
    grid_ring = PolyRing(ring.field, [("c", ("a", "b", "w"))])
    plane_strata = [
        (0, ("a", "b", "w"),
         {"x0": grid_ring.one(), "x1": grid_ring.var("a"),
          "x2": grid_ring.var("b"), "z": grid_ring.var("w")}),
        (1, ("a", "w"),
         {"x0": grid_ring.zero(), "x1": grid_ring.one(),
          "x2": grid_ring.var("a"), "z": grid_ring.var("w")}),
    ]
    for piv, names, images in plane_strata:
        g = _compose_chart(f, images, grid_ring)
        idx = tensor_zero_indices(g, names, vf)
        if not idx.size:
            continue
        grids = grid_coords_at(vf, names, idx)
        # drop the blown-up base points (handled on the blowup charts)
        if piv == 0:
            base = vf.is_zero(grids["a"]) & vf.is_zero(grids["b"])
        else:
            base = vf.is_zero(grids["a"]) & np.ones(idx.size, bool)
        keep = ~(base & np.ones(idx.size, bool))
        k = int(keep.sum())
        if not k:
            continue
        report["on_surface"] += k
        if piv == 0:
            sub = {"x0": 1, "x1": _take(vf, grids["a"], keep),
                   "x2": _take(vf, grids["b"], keep)}
        else:
            sub = {"x0": 0, "x1": 1, "x2": _take(vf, grids["a"], keep)}
        sub["z"] = _take(vf, grids["w"], keep)
        local = [f"x{i}" for i in range(3) if i != piv] + ["z"]
        sing = np.ones(k, dtype=bool)
        for v in local:
            sing &= vf.is_zero(poly_values(partials[v], sub, vf)) \
                & np.ones(k, bool)
        if sing.any():
            for i in np.flatnonzero(sing)[:5]:
                report["singular"].append(_extract_point(
                    vf, sub, int(i), ("x0", "x1", "x2", "z")))
    # blowup charts at t = 0
    for center in range(3):
        for half in (0, 1):
            g = cone_blowup_chart(f, chart_ring, center, half)
            dg = {v: g.derivative(v) for v in ("t", "u", "z")}
            at0 = {"t": 0, "u": chart_ring.var("u"),
                   "z": chart_ring.var("z")}
            g0 = g.substitute(at0)
            idx = tensor_zero_indices(g0, ("u", "z"), vf)
            if half == 1:
                # the u != 0 directions already appear on the half-0 chart
                idx = idx[idx // vf.q == 0]
            k = idx.size
            if not k:
                continue
            report["on_surface"] += k
            pts = grid_coords_at(vf, ("u", "z"), idx)
            pts["t"] = 0
            sing = np.ones(k, dtype=bool)
            for v in ("t", "u", "z"):
                sing &= vf.is_zero(poly_values(dg[v], pts, vf)) \
                    & np.ones(k, bool)
            if sing.any():
                for i in np.flatnonzero(sing)[:5]:
                    report["singular"].append(
                        ("exceptional", center, half)
                        + _extract_point(vf, pts, int(i), ("u", "z")))
    report["clean"] = not report["singular"]
    return report


def count_fixed_cone(phi_values_fn, cubic_scalars, z_scalar, vf):
    """Number of cone points fixed by a group element, from the transforms
    of the embedding coordinates.

    phi_values_fn(coords, vf) must return the list of seven cubic coordinate
    values on a batch of Sigma points; cubic_scalars are the coordinate
    multipliers of the element and z_scalar the cone-variable multiplier.
    A point (s, z) is fixed iff all its nonzero embedding coordinates share
    one multiplier.
    """
    total = 1  # the vertex
    q = vf.q
    for piv, coords, keep, size in cone_plane_groups(vf, with_z=False):
        total += _fixed_on_sigma_batch(
            phi_values_fn(coords, vf), cubic_scalars, z_scalar, keep, size,
            q, vf)
    # exceptional points: direction (1, u) and (0, 1) at each center
    for center in range(3):
        for half in (0, 1):
            for grid, size in grid_chunks(vf, ("u",) if half == 0 else ()):
                coords = {"center": center, "half": half,
                          "u": grid.get("u", 0)}
                total += _fixed_on_sigma_batch(
                    phi_values_fn(coords, vf), cubic_scalars, z_scalar,
                    np.ones(size, bool), size, q, vf)
    return total


def _fixed_on_sigma_batch(phis, cubic_scalars, z_scalar, keep, size, q, vf):
    nz = [~(vf.is_zero(v) & np.ones(size, bool)) for v in phis]
    # coherence among the cubic coordinates (the z = 0 fixed point test)
    coherent = np.ones(size, dtype=bool)
    for a, b in itertools.combinations(range(len(phis)), 2):
        if cubic_scalars[a] != cubic_scalars[b]:
            coherent &= ~(nz[a] & nz[b])
    # with z != 0 the z-coordinate joins the coherence requirement
    withz = coherent.copy()
    for a in range(len(phis)):
        if cubic_scalars[a] != z_scalar:
            withz &= ~nz[a]
    return int((coherent & keep).sum()) + (q - 1) * int((withz & keep).sum())
