"""Integer and rational univariate polynomials.

Polynomials are coefficient sequences, constant term first.  Rational work
(Euclid, Sturm chains) uses :class:`fractions.Fraction` throughout; nothing in
here touches floating point.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PolynomialError

__all__ = [
    "IntPolynomial",
    "parse_polynomial",
    "poly_trim",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_divmod",
    "poly_xgcd",
    "poly_eval",
    "sturm_chain",
    "sturm_count",
    "isolate_real_roots",
    "schur_cohn_inside",
    "charpoly",
]


@dataclass(frozen=True)
class IntPolynomial:
    """A monic-or-not integer polynomial, constant term first."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) < 2:
            raise PolynomialError("polynomial must have degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        return poly_eval(self.coefficients, x)

    def __str__(self) -> str:
        return format_polynomial(self.coefficients)

    def to_csv(self) -> str:
        return ",".join(str(c) for c in self.coefficients)

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        return parse_polynomial(text)


def format_polynomial(coeffs: Sequence, var: str = "x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = "" if mag == 1 else str(mag)
            body += var if k == 1 else f"{var}^{k}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f"{sign}{body}"
    return out


_TERM = re.compile(r"([+-]?)(\d*)(?:\*?(x)(?:\^(\d+))?)?")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse either ``"1,-3,1"`` (constant first) or ``"x^2-3x+1"``."""
    s = text.replace(" ", "")
    if not s:
        raise PolynomialError("empty polynomial")
    if "x" not in s:
        try:
            return IntPolynomial(tuple(int(c) for c in s.split(",")))
        except ValueError as exc:
            raise PolynomialError(f"cannot parse coefficients {text!r}") from exc
    s = s.replace("**", "^")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise PolynomialError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        sign, digits, var, power = m.groups()
        if not digits and not var:
            raise PolynomialError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        mag = int(digits) if digits else 1
        k = (int(power) if power else 1) if var else 0
        coeffs[k] = coeffs.get(k, 0) + (-mag if sign == "-" else mag)
        pos = m.end()
    deg = max(coeffs)
    return IntPolynomial(tuple(coeffs.get(k, 0) for k in range(deg + 1)))


# --- rational polynomial helpers (lists, constant first) ---------------------

def poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_sub(p, q):
    n = max(len(p), len(q))
    return poly_trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def _is_zero(p) -> bool:
    return len(p) == 1 and p[0] == 0


def poly_divmod(p, q):
    q = poly_trim(q)
    if _is_zero(q):
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in poly_trim(p)]
    lead = Fraction(q[-1])
    if len(r) < len(q):
        return [Fraction(0)], r
    quot = [Fraction(0)] * (len(r) - len(q) + 1)
    for k in range(len(r) - len(q), -1, -1):
        c = r[k + len(q) - 1] / lead
        quot[k] = c
        if c:
            for i, b in enumerate(q):
                r[k + i] -= c * b
    r = poly_trim(r[: len(q) - 1] or [Fraction(0)])
    return poly_trim(quot), r


def poly_xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = [Fraction(c) for c in poly_trim(a)], [Fraction(c) for c in poly_trim(b)]
    s0, s1 = [Fraction(1)], [Fraction(0)]
    t0, t1 = [Fraction(0)], [Fraction(1)]
    while not _is_zero(r1):
        quo, rem = poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_sub(s0, poly_mul(quo, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(quo, t1))
    lead = r0[-1]
    return ([c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0])


def poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _derivative(p):
    return poly_trim([k * p[k] for k in range(1, len(p))] or [0])


# --- real roots ---------------------------------------------------------------

def sturm_chain(p):
    """Canonical Sturm sequence of a squarefree polynomial."""
    chain = [[Fraction(c) for c in poly_trim(p)]]
    chain.append([Fraction(c) for c in _derivative(chain[0])])
    while not _is_zero(chain[-1]) and len(chain[-1]) > 1:
        _, rem = poly_divmod(chain[-2], chain[-1])
        chain.append([-c for c in rem])
    if _is_zero(chain[-1]):
        chain.pop()
    return chain


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _chain_at(chain, x):
    if x == math.inf:
        return [c[-1] for c in chain]
    if x == -math.inf:
        return [c[-1] * (-1) ** (len(c) - 1) for c in chain]
    return [poly_eval(c, x) for c in chain]


def sturm_count(chain, a, b) -> int:
    """Number of distinct real roots in the half-open interval ``(a, b]``."""
    return _sign_changes(_chain_at(chain, a)) - _sign_changes(_chain_at(chain, b))


def cauchy_bound(p) -> Fraction:
    lead = abs(Fraction(p[-1]))
    return 1 + max(abs(Fraction(c)) for c in p[:-1]) / lead


def isolate_real_roots(p, width=Fraction(1, 2**20)):
    """Disjoint rational intervals ``(lo, hi]``, one per real root of squarefree ``p``.

    Bisection on Sturm counts; each returned interval has width <= ``width``
    (exact roots at dyadic points collapse to ``(r, r]`` with lo == hi).
    """
    chain = sturm_chain(p)
    bound = cauchy_bound(p)
    todo = [(-bound, bound)]
    out = []
    while todo:
        lo, hi = todo.pop()
        n = sturm_count(chain, lo, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if n == 1 and poly_eval(p, mid) == 0:
            out.append((mid, mid))
            continue
        todo.append((mid, hi))
        todo.append((lo, mid))
    return sorted(out)


# --- complex roots: Schur-Cohn -----------------------------------------------

def schur_cohn_inside(coeffs):
    """Count roots strictly inside the unit disk, or ``None`` when the test is singular.

    Real coefficients, constant first.  Uses the Schur transform
    ``f -> f(0) f - lc(f) f*``; the count is the number of negative partial
    products of the successive constant terms.  Singular (a vanishing
    constant term or a degree drop) means roots on or symmetric about the
    circle; the caller perturbs the radius.
    """
    f = [Fraction(c) for c in poly_trim(coeffs)]
    n = len(f) - 1
    prod_sign = 1
    inside = 0
    while n > 0:
        a0, an = f[0], f[n]
        g = [a0 * f[k] - an * f[n - k] for k in range(n)]
        if g[0] == 0 or g[-1] == 0:
            return None
        prod_sign *= 1 if g[0] > 0 else -1
        if prod_sign < 0:
            inside += 1
        f = g
        n -= 1
    return inside


# --- matrices -------------------------------------------------------------------

def charpoly(matrix) -> list[int]:
    """Characteristic polynomial det(xI - A) of an integer matrix (Faddeev-LeVerrier)."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        for i in range(n):
            m[i][i] += coeffs[n - k + 1]
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
        m = am
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("non-integral characteristic polynomial")
        out.append(int(c))
    return out
