"""Small exact linear algebra over any of the scalar fields.

Matrices are lists of lists of field elements.  Everything is plain Gaussian
elimination; the spaces in this project are at most a couple of hundred
dimensions, so there is no need for anything cleverer.
"""

from __future__ import annotations


def rref(rows, one):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_columns).  Zero rows are dropped.  Pivots are
    normalized to 1, which makes the result canonical for the row space.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = one / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows, one) -> int:
    reduced, _ = rref(rows, one)
    return len(reduced)


def kernel_basis(rows, ncols, one, zero):
    """Basis of the right kernel of the matrix, as coordinate vectors."""
    reduced, pivots = rref(rows, one)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for rr, pc in zip(reduced, pivots):
            vec[pc] = -rr[fc]
        basis.append(vec)
    return basis


def solve(rows, rhs, one, zero):
    """One solution x of A x = b, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0])
    reduced, pivots = rref(aug, one)
    x = [zero] * ncols
    for rr, pc in zip(reduced, pivots):
        if pc == ncols:
            return None
        x[pc] = rr[ncols]
    return x
