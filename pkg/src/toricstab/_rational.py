"""Small exact linear-algebra helpers over the rationals.

Everything combinatorial in the geometry layer runs on `fractions.Fraction`;
floats appear only at integration time.
"""

import math
from fractions import Fraction


def frac(x):
    """Coerce ints, strings like '3/4', and Fractions; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected rational data, got {type(x).__name__}: {x!r}")


def frac_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(xs):
    return tuple(frac(x) for x in xs)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def is_primitive(iv):
    g = 0
    for x in iv:
        g = math.gcd(g, abs(int(x)))
    return g == 1


def solve(rows, rhs):
    """Solve the square rational system; returns None when singular."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[r][n] for r in range(n))


def rank(rows):
    if not rows:
        return 0
    a = [list(r) for r in rows]
    m, n = len(a), len(a[0])
    rk, col = 0, 0
    while rk < m and col < n:
        piv = next((r for r in range(rk, m) if a[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        a[rk], a[piv] = a[piv], a[rk]
        pv = a[rk][col]
        for r in range(rk + 1, m):
            if a[r][col] != 0:
                f = a[r][col] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[rk])]
        rk += 1
        col += 1
    return rk


def kernel_vector(rows, n):
    """A nonzero kernel vector of an (n-1)-rank row set in R^n, or None."""
    a = [list(r) for r in rows]
    pivots = {}
    rk, col = 0, 0
    m = len(a)
    while rk < m and col < n:
        piv = next((r for r in range(rk, m) if a[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        a[rk], a[piv] = a[piv], a[rk]
        pv = a[rk][col]
        a[rk] = [x / pv for x in a[rk]]
        for r in range(m):
            if r != rk and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rk])]
        pivots[col] = rk
        rk += 1
        col += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    c0 = free[0]
    v = [Fraction(0)] * n
    v[c0] = Fraction(1)
    for c, r in pivots.items():
        v[c] = -a[r][c0]
    return tuple(v)


def affine_rank(points):
    """Dimension of the affine hull of rational points."""
    if not points:
        return -1
    p0 = points[0]
    return rank([vsub(p, p0) for p in points[1:]])


def det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            d = -d
        pv = a[col][col]
        d *= pv
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return d
