"""Exact dense linear algebra over the rationals.

Matrices are lists of rows, entries ``Fraction`` or ``int``.  Pivoting is
deterministic: columns are scanned left to right and rows top to bottom, the
first nonzero entry wins.  This makes kernels, pivot selections and echelon
forms reproducible across runs.

Ranks are computed with the fraction-free Bareiss scheme on an integerized
copy of the matrix; ``rank_mod`` gives a fast lower bound modulo a large
prime (used by callers that can certify exactness by a dimension squeeze).
"""

from fractions import Fraction
from math import gcd

#: large prime for modular rank bounds
DEFAULT_PRIME = (1 << 61) - 1


def mat_copy(rows):
    return [list(r) for r in rows]


def transpose(rows):
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def matmul(a, b):
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def is_zero_matrix(rows):
    return all(x == 0 for r in rows for x in r)


def _int_rows(rows):
    """Scale each row by the lcm of its denominators; preserves row space."""
    out = []
    for row in rows:
        denom = 1
        for x in row:
            d = x.denominator if isinstance(x, Fraction) else 1
            denom = denom * d // gcd(denom, d)
        out.append([int(x * denom) for x in row])
    return out


def rank(rows):
    """Exact rank via fraction-free Bareiss elimination."""
    if not rows or not rows[0]:
        return 0
    m = _int_rows(rows)
    nrows, ncols = len(m), len(m[0])
    prev = 1
    rk = 0
    for col in range(ncols):
        piv = None
        for i in range(rk, nrows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != rk:
            m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][col]
        mr = m[rk]
        for i in range(rk + 1, nrows):
            mi = m[i]
            f = mi[col]
            for j in range(col + 1, ncols):
                mi[j] = (p * mi[j] - f * mr[j]) // prev
            mi[col] = 0
        prev = p
        rk += 1
        if rk == nrows:
            break
    return rk


def rank_mod(rows, p=DEFAULT_PRIME):
    """Rank of the matrix reduced mod p; a lower bound for the exact rank."""
    if not rows or not rows[0]:
        return 0
    m = []
    for row in rows:
        mr = []
        for x in row:
            if isinstance(x, Fraction):
                mr.append(x.numerator * pow(x.denominator, p - 2, p) % p)
            else:
                mr.append(x % p)
        m.append(mr)
    nrows, ncols = len(m), len(m[0])
    rk = 0
    for col in range(ncols):
        piv = None
        for i in range(rk, nrows):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = pow(m[rk][col], p - 2, p)
        row_rk = m[rk]
        for i in range(rk + 1, nrows):
            f = m[i][col]
            if f:
                f = f * inv % p
                mi = m[i]
                for j in range(col, ncols):
                    mi[j] = (mi[j] - f * row_rk[j]) % p
        rk += 1
        if rk == nrows:
            break
    return rk


def rref(rows):
    """Reduced row echelon form.

    Returns:
        (R, pivots): the echelon matrix (Fractions) and the pivot column
        indices in increasing order.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if not m or not m[0]:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    rk = 0
    for col in range(ncols):
        piv = None
        for i in range(rk, nrows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][col]
        m[rk] = [x / p for x in m[rk]]
        for i in range(nrows):
            if i != rk and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        pivots.append(col)
        rk += 1
        if rk == nrows:
            break
    return m, pivots


def nullspace(rows):
    """Basis of the kernel, one vector per free column, deterministic.

    Returns a list of columns (each a list of Fractions).  The basis vector
    for free column f has entry 1 at f and the negated echelon entries at
    the pivot positions.
    """
    if not rows or not rows[0]:
        ncols = len(rows[0]) if rows else 0
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows)
    ncols = len(rows[0])
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][free]
        basis.append(v)
    return basis


def solve(a, b):
    """Solve a x = b exactly; raises ValueError if singular or inconsistent."""
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    R, pivots = rref(aug)
    ncols = len(a[0]) if a else 0
    if ncols in pivots:
        raise ValueError("inconsistent system")
    if len(pivots) < ncols:
        raise ValueError("singular system")
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][-1]
    return x


def inv(a):
    """Exact inverse of a square matrix."""
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in R]


def det(a):
    """Exact determinant via Bareiss."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in a]
    sign = 1
    prev = Fraction(1)
    for col in range(n - 1):
        piv = None
        for i in range(col, n):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                m[i][j] = (p * m[i][j] - m[i][col] * m[col][j]) / prev
            m[i][col] = Fraction(0)
        prev = p
    return sign * m[n - 1][n - 1]


def is_invertible(a):
    n = len(a)
    return n == 0 or (len(a[0]) == n and rank(a) == n)


def is_psd(a):
    """Exact positive semidefiniteness test for a symmetric rational matrix.

    Performs congruence elimination with positive diagonal pivots.  The
    matrix is PSD iff every eliminated pivot is positive and whenever a
    remaining diagonal entry is zero, its whole row is zero.
    """
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    active = list(range(n))
    while active:
        piv = None
        for i in active:
            if m[i][i] > 0:
                piv = i
                break
        if piv is None:
            for i in active:
                if m[i][i] < 0:
                    return False
                for j in active:
                    if m[i][j] != 0:
                        return False
            return True
        p = m[piv][piv]
        active.remove(piv)
        for i in active:
            f = m[i][piv] / p
            if f != 0:
                for j in active:
                    m[i][j] -= f * m[piv][j]
            m[i][piv] = Fraction(0)
        for j in active:
            m[piv][j] = Fraction(0)
    return True
