"""Exact dense linear algebra over Q and over rational-function fields.

Two tiers:

* generic routines (`solve`, `nullspace`, `inv`, `rank`) that work over any
  field-like scalars (Fraction, RatFunc, Sqrt2Ext) via straight Gaussian
  elimination; used for the small symbolic systems (soldering inverses,
  metric inverses, purity kernels);
* Fraction-specialised wrappers backed by sympy's DomainMatrix over QQ for
  the larger constant systems that arise in the algebraic layer.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _is_zero(x):
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    return x.is_zero()


# ---------------------------------------------------------------------------
# Generic elimination (field-like entries)
# ---------------------------------------------------------------------------

def rref(rows):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not _is_zero(rows[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows):
    return len(rref(rows)[1])


def solve(rows, rhs):
    """One solution x of A x = rhs, or None if inconsistent.

    rhs may be a vector or a list of columns (matrix right-hand side); the
    return mirrors the shape.
    """
    matrix_rhs = bool(rhs) and isinstance(rhs[0], (list, tuple))
    cols = [list(c) for c in rhs] if matrix_rhs else [list(rhs)]
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [c[i] for c in cols] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if any(p >= n for p in pivots):
        return None
    pivots_in_a = [p for p in pivots if p < n]
    sols = []
    for k in range(len(cols)):
        x = [_zero_like(rows) for _ in range(n)]
        for r_idx, p in enumerate(pivots_in_a):
            x[p] = red[r_idx][n + k]
        sols.append(x)
    return sols if matrix_rhs else sols[0]


def _zero_like(rows):
    for r in rows:
        for x in r:
            if isinstance(x, (int, Fraction)):
                return Fraction(0)
            return x - x
    return Fraction(0)


def nullspace(rows):
    """Basis of the kernel of A (list of vectors)."""
    if not rows:
        return []
    n = len(rows[0])
    red, pivots = rref(rows)
    zero = _zero_like(rows)
    one = None
    for r in red:
        for x in r:
            if not _is_zero(x):
                one = x / x
                break
        if one is not None:
            break
    if one is None:
        one = Fraction(1)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * n
        v[fc] = one
        for r_idx, p in enumerate(pivots):
            v[p] = zero - red[r_idx][fc]
        basis.append(v)
    return basis


def inv(rows):
    """Inverse of a square matrix; raises if singular."""
    n = len(rows)
    zero = _zero_like(rows)
    aug = []
    for i, r in enumerate(rows):
        unit = [zero] * n
        # derive an exact one from the row entries to stay in the field
        unit[i] = _one_like(rows)
        aug.append(list(r) + unit)
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def _one_like(rows):
    z = _zero_like(rows)
    if isinstance(z, Fraction):
        return Fraction(1)
    for r in rows:
        for x in r:
            if not _is_zero(x):
                return x / x
    raise ZeroDivisionError("matrix is singular")


def mat_mul(a, b):
    return [[sum_prod(ra, [rb[j] for rb in b]) for j in range(len(b[0]))] for ra in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in r] for r in a]


def bracket(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def mat_trace(a):
    return sum_prod([1] * len(a), [a[i][i] for i in range(len(a))])


def mat_is_zero(a):
    return all(_is_zero(x) for r in a for x in r)


def zeros(nr, nc=None):
    nc = nr if nc is None else nc
    return [[Fraction(0)] * nc for _ in range(nr)]


def eye(n):
    m = zeros(n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def vec(a):
    """Row-major flattening of a matrix."""
    return [x for r in a for x in r]


def unvec(v, nr, nc):
    return [list(v[i * nc:(i + 1) * nc]) for i in range(nr)]


def sum_prod(xs, ys):
    it = iter(zip(xs, ys))
    x0, y0 = next(it)
    acc = x0 * y0
    for x, y in it:
        acc = acc + x * y
    return acc


def mat_vec(a, v):
    return [sum_prod(r, v) for r in a]


def sparse_rows(a):
    """Sparse row form [(col, val), ...] per row, for constant matrices."""
    return [[(j, x) for j, x in enumerate(r) if not _is_zero(x)] for r in a]


def sparse_apply(sp, v):
    """Apply a sparse-row constant matrix to a vector of any scalars."""
    out = []
    for row in sp:
        acc = None
        for j, c in row:
            t = c * v[j]
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else 0)
    return out


def transpose(a):
    return [list(col) for col in zip(*a)]


# ---------------------------------------------------------------------------
# Fraction-specialised fast paths (DomainMatrix over QQ)
# ---------------------------------------------------------------------------

def _to_dm(rows):
    data = [[QQ(x.numerator, x.denominator) if isinstance(x, Fraction) else QQ(x)
             for x in r] for r in rows]
    return DomainMatrix(data, (len(rows), len(rows[0]) if rows else 0), QQ)


def _from_dm(dm):
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row]
            for row in dm.to_list()]


def qrank(rows):
    if not rows or not rows[0]:
        return 0
    return _to_dm(rows).rank()


def qnullspace(rows):
    """Kernel basis over Q, rows of the result are basis vectors."""
    if not rows or not rows[0]:
        return []
    ns = _to_dm(rows).nullspace()
    return _from_dm(ns)


def qsolve(rows, rhs_cols):
    """Solve A X = B over Q for a matrix right-hand side (list of columns).

    Returns the list of solution columns, or None if inconsistent.
    """
    return solve(rows, rhs_cols)


def qrref(rows):
    if not rows or not rows[0]:
        return [list(r) for r in rows], []
    dm, pivots = _to_dm(rows).rref()
    return _from_dm(dm), list(pivots)


def qsolve_fast(rows, rhs_cols):
    """Fraction-only solve with matrix RHS, via DomainMatrix rref."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [c[i] for c in rhs_cols] for i, r in enumerate(rows)]
    red, pivots = qrref(aug)
    if any(p >= n for p in pivots):
        return None
    sols = []
    for k in range(len(rhs_cols)):
        x = [Fraction(0)] * n
        for r_idx, p in enumerate(pivots):
            x[p] = red[r_idx][n + k]
        sols.append(x)
    return sols


def qmatmul(a, b):
    if not a or not b:
        return []
    return _from_dm(_to_dm(a).matmul(_to_dm(b)))


def qinv(a):
    return _from_dm(_to_dm(a).inv())


def column_space_basis(rows):
    """Basis of the column space, as columns of the original matrix."""
    red, pivots = qrref(rows)
    cols = transpose(rows)
    return [cols[p] for p in pivots]


def in_span(basis_vectors, v):
    """Whether v lies in the span of the given vectors (all over Fraction)."""
    if not basis_vectors:
        return all(x == 0 for x in v)
    a = transpose(basis_vectors)
    return solve(a, list(v)) is not None
