"""Small exact matrix helpers over Q and Q(beta)."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

__all__ = [
    "matmul",
    "matvec",
    "identity",
    "transpose",
    "solve",
    "inverse",
    "det",
    "nullspace",
    "hermite_columns",
    "poly_of_matrix",
]


def identity(n, one=1, zero=0):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def poly_of_matrix(coeffs, a):
    """Horner evaluation of a polynomial (constant first) at a square matrix."""
    n = len(a)
    acc = [[Fraction(0)] * n for _ in range(n)]
    for c in reversed(list(coeffs)):
        acc = matmul(acc, a)
        for i in range(n):
            acc[i][i] += c
    return acc


def _rref(rows, is_zero):
    """Reduced row echelon form in place; returns pivot columns."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not is_zero(m[i][c]):
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _zero(x):
    return x == 0


def nullspace(a, field=None):
    """Basis of the right kernel of a (entries Fractions or AlgNums)."""
    m, pivots = _rref(a, _zero)
    n = len(a[0])
    zero = field.zero if field is not None else Fraction(0)
    one = field.one if field is not None else Fraction(1)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * n
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def solve(a, b):
    """Solve a x = b for square invertible a over Q."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    m, pivots = _rref(aug, _zero)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [m[i][n] for i in range(n)]


def inverse(a):
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = _rref(aug, _zero)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def det(a):
    """Determinant via fraction-free Bareiss elimination."""
    m = [list(r) for r in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = m[k][k]
    out = sign * m[n - 1][n - 1]
    if isinstance(out, Fraction) and out.denominator == 1:
        return int(out)
    return out


def hermite_columns(cols):
    """Integer basis of the lattice spanned by integer column vectors.

    Column-style Hermite reduction; returns the nonzero basis columns.
    """
    vecs = [list(map(int, c)) for c in cols]
    n = len(vecs[0]) if vecs else 0
    basis = []
    row = 0
    while vecs and row < n:
        vecs = [v for v in vecs if any(v)]
        active = [v for v in vecs if v[row] != 0]
        if not active:
            row += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda v: abs(v[row]))
            piv = active[0]
            for v in active[1:]:
                qt = v[row] // piv[row]
                for i in range(n):
                    v[i] -= qt * piv[i]
            active = [v for v in active if v[row] != 0]
        piv = active[0]
        if piv[row] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        vecs = [v for v in vecs if v[row] == 0 and any(v)]
        row += 1
    return basis


def common_denominator(values):
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)
