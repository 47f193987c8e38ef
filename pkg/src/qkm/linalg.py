"""Exact linear algebra over Q(q) and over Q.

Rank computations clear denominators row-wise and run fraction-free
(Bareiss) elimination on Laurent-polynomial entries, so no rational
function ever appears mid-elimination.  Solving uses straightforward
Gaussian elimination over the field with eagerly reduced entries.
"""
from __future__ import annotations

from fractions import Fraction

from .qfield import FieldElem, LaurentPoly, lp_divexact

Matrix = list[list[FieldElem]]


def _clear_denominators(rows: Matrix) -> list[list[LaurentPoly]]:
    out = []
    for row in rows:
        mult = LaurentPoly.const(1)
        for x in row:
            if not x.is_polynomial():
                mult = mult * x.den
        out.append([lp_divexact(x.num * mult, x.den) for x in row])
    return out


def rank(rows: Matrix) -> int:
    """Exact rank over Q(q) via fraction-free elimination."""
    m = _clear_denominators(rows)
    return rank_poly(m)


def rank_poly(m: list[list[LaurentPoly]]) -> int:
    m = [row[:] for row in m]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    prev = LaurentPoly.const(1)
    r = 0
    col = 0
    while r < nrows and col < ncols:
        piv = None
        for i in range(r, nrows):
            if not m[i][col].is_zero():
                piv = i
                break
        if piv is None:
            col += 1
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, nrows):
            ci = m[i][col]
            for j in range(col + 1, ncols):
                num = p * m[i][j] - ci * m[r][j]
                m[i][j] = lp_divexact(num, prev)
            m[i][col] = LaurentPoly.zero()
        prev = p
        r += 1
        col += 1
    return r


def solve(rows: Matrix, rhs: list[FieldElem]) -> list[FieldElem] | None:
    """One solution of A x = b over Q(q), or None if inconsistent.

    Free variables are set to zero.
    """
    sols = solve_many(rows, [rhs])
    return None if sols is None else sols[0]


def solve_many(rows: Matrix, rhss: list[list[FieldElem]]) -> list[list[FieldElem]] | None:
    """Solve A x = b for several right-hand sides at once; None if any fails."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    k = len(rhss)
    aug = [[rows[i][j] for j in range(ncols)] + [rhss[t][i] for t in range(k)]
           for i in range(nrows)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not aug[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col].inv()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and not aug[i][col].is_zero():
                c = aug[i][col]
                aug[i] = [a - c * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        for t in range(k):
            if not aug[i][ncols + t].is_zero():
                return None
    zero = FieldElem.zero()
    sols = []
    for t in range(k):
        x = [zero] * ncols
        for i, col in enumerate(pivots):
            x[col] = aug[i][ncols + t]
        sols.append(x)
    return sols


def invert(rows: Matrix) -> Matrix:
    n = len(rows)
    eye = [[FieldElem.one() if i == j else FieldElem.zero() for i in range(n)]
           for j in range(n)]
    cols = solve_many(rows, eye)
    if cols is None:
        raise ValueError("matrix not invertible")
    # solve_many returns solutions of A x = e_j, i.e. the columns of A^-1
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def nullspace(rows: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of the right kernel of A over Q(q)."""
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if nrows else 0
    aug = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not aug[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col].inv()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and not aug[i][col].is_zero():
                c = aug[i][col]
                aug[i] = [a - c * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    zero, one = FieldElem.zero(), FieldElem.one()
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for i, pc in enumerate(pivots):
            v[pc] = -aug[i][fc]
        basis.append(v)
    return basis


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    zero = FieldElem.zero()
    out = []
    for row in a:
        orow = []
        for j in range(len(b[0])):
            s = zero
            for k, x in enumerate(row):
                if not x.is_zero() and not b[k][j].is_zero():
                    s = s + x * b[k][j]
            orow.append(s)
        out.append(orow)
    return out


def mat_vec(a: Matrix, v: list[FieldElem]) -> list[FieldElem]:
    zero = FieldElem.zero()
    out = []
    for row in a:
        s = zero
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                s = s + x * y
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# Rational (Fraction) linear algebra, used for Cartan-datum bookkeeping and
# for the specialized-rank oracle.


def frac_rank(rows: list[list[Fraction]]) -> int:
    m = [row[:] for row in rows]
    nrows, ncols = len(m), len(m[0]) if m else 0
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, nrows):
            if m[i][col]:
                c = m[i][col] / p
                m[i] = [a - c * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def frac_solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """One rational solution of A x = b (free variables zero), or None."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [rows[i][:] + [rhs[i]] for i in range(nrows)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if aug[i][col]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [x / p for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][col]:
                c = aug[i][col]
                aug[i] = [a - c * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if aug[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        x[col] = aug[i][ncols]
    return x


def frac_nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if aug[i][col]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [x / p for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][col]:
                c = aug[i][col]
                aug[i] = [a - c * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    basis = []
    for fc in [c for c in range(ncols) if c not in pivots]:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -aug[i][fc]
        basis.append(v)
    return basis
