"""Exact arithmetic in Q(beta) for a certified Pisot number beta.

Elements are stored as integer numerators over a positive common denominator,
in the power basis 1, beta, ..., beta^(d-1).  Ordering questions are settled
by evaluating numerators on a dyadic enclosure of beta with integer interval
arithmetic, refining the enclosure until the sign is unambiguous.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import reduce

import numpy as np
import sympy

from .errors import (
    DegreeTooLarge,
    NotIrreducible,
    NotMonic,
    NotPisot,
    PrecisionExceeded,
)
from .polynomials import (
    IntPolynomial,
    isolate_real_roots,
    parse_polynomial,
    poly_eval,
    poly_xgcd,
    schur_cohn_inside,
    sturm_chain,
    sturm_count,
)

__all__ = [
    "Sign",
    "PisotField",
    "AlgNum",
    "verify_pisot",
    "sign_of",
    "floor_of",
    "in_z_inv_beta",
    "alg_arithmetic",
]

MAX_DEGREE = 12
THETA_CEILING = 1 - Fraction(1, 2**20)
_START_BITS = 128
_MAX_BITS = 1 << 16


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def _interval_eval(nums, a, k):
    """Bounds of sum nums[i] x^i over x in [a/2^k, (a+1)/2^k], scaled by 2^(k*(len-1))."""
    top = len(nums) - 1
    lo = hi = 0
    pa, pb = 1, 1
    for i, c in enumerate(nums):
        if c:
            scale = 1 << (k * (top - i))
            if c > 0:
                lo += c * pa * scale
                hi += c * pb * scale
            else:
                lo += c * pb * scale
                hi += c * pa * scale
        pa *= a
        pb *= a + 1
    return lo, hi


class PisotField:
    """The field Q(beta) for a verified Pisot number beta.

    Build instances with :func:`verify_pisot`; the constructor trusts its
    arguments.
    """

    def __init__(self, minpoly: IntPolynomial, floor_beta: int, theta_max: Fraction):
        self.minpoly = minpoly
        self.degree = minpoly.degree
        self.theta_max = theta_max
        self._floor = floor_beta
        self._levels = {0: floor_beta}
        self._top = 0
        d = self.degree
        # beta^k in the power basis for k < 2d - 1
        low = [-c for c in minpoly.coefficients[:-1]]
        table = []
        for k in range(max(2 * d - 1, 1)):
            if k < d:
                row = [0] * d
                row[k] = 1
            else:
                prev = table[-1]
                row = [0] + prev[:-1]
                carry = prev[-1]
                row = [r + carry * c for r, c in zip(row, low)]
            table.append(row)
        self._powers = table
        self._inv_beta = None

    # -- enclosures ----------------------------------------------------------

    def _sign_p(self, a, k):
        """Sign of minpoly at a/2^k, computed with integers."""
        coeffs = self.minpoly.coefficients
        d = len(coeffs) - 1
        v = sum(c * a**i * (1 << (k * (d - i))) for i, c in enumerate(coeffs))
        return (v > 0) - (v < 0)

    def enclosure(self, bits: int) -> tuple[int, int]:
        """``(a, k)`` with k >= bits and a/2^k < beta < (a+1)/2^k."""
        if self.degree == 1:
            return self._floor << bits, bits
        k = self._top
        if k < bits:
            a = self._levels[k]
            s_lo = self._sign_p(a, k)
            while k < bits:
                a, k = 2 * a, k + 1
                s_mid = self._sign_p(a + 1, k)
                if s_mid == s_lo:
                    a += 1
            self._levels[k] = a
            self._top = k
            return a, k
        a = self._levels[self._top]
        return a >> (self._top - bits), bits

    @property
    def beta_enclosure(self) -> tuple[Fraction, Fraction]:
        a, k = self.enclosure(64)
        return Fraction(a, 1 << k), Fraction(a + 1, 1 << k)

    @property
    def beta_float(self) -> float:
        lo, hi = self.beta_enclosure
        return float((lo + hi) / 2)

    # -- element constructors ----------------------------------------------

    def __call__(self, coords, den=1) -> "AlgNum":
        coords = list(coords)
        if len(coords) > self.degree:
            return self.from_poly(coords, den)
        return AlgNum(self, coords + [0] * (self.degree - len(coords)), den)

    def from_poly(self, coeffs, den=1) -> "AlgNum":
        """Element sum coeffs[i] beta^i / den, with reduction modulo the minimal polynomial."""
        fr = [Fraction(c) for c in coeffs]
        common = reduce(math.lcm, (f.denominator for f in fr), 1)
        ints = [int(f * common) for f in fr]
        return AlgNum(self, self._reduce(ints), den * common)

    def rational(self, q) -> "AlgNum":
        q = Fraction(q)
        return AlgNum(self, [q.numerator] + [0] * (self.degree - 1), q.denominator)

    @property
    def zero(self) -> "AlgNum":
        return self.rational(0)

    @property
    def one(self) -> "AlgNum":
        return self.rational(1)

    @property
    def beta(self) -> "AlgNum":
        if self.degree == 1:
            return self.rational(self._floor)
        return self([0, 1])

    def beta_power(self, n: int) -> "AlgNum":
        if n >= 0:
            return self.beta ** n
        if self._inv_beta is None:
            self._inv_beta = self.beta.inverse()
        return self._inv_beta ** (-n)

    def _reduce(self, ints):
        d = self.degree
        out = list(ints[:d]) + [0] * max(0, d - len(ints))
        for k in range(d, len(ints)):
            c = ints[k]
            if c:
                row = self._power_row(k)
                for j in range(d):
                    out[j] += c * row[j]
        return out

    def _power_row(self, k):
        while k >= len(self._powers):
            prev = self._powers[-1]
            low = [-c for c in self.minpoly.coefficients[:-1]]
            row = [0] + prev[:-1]
            row = [r + prev[-1] * c for r, c in zip(row, low)]
            self._powers.append(row)
        return self._powers[k]

    def __eq__(self, other):
        return isinstance(other, PisotField) and other.minpoly == self.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"PisotField({self.minpoly})"

    def parse(self, text: str) -> "AlgNum":
        """Parse ``"a0,a1,..."`` (coordinates, each an int or fraction) or a single rational."""
        parts = [Fraction(p.strip()) for p in text.split(",")]
        return self.from_poly(parts)


class AlgNum:
    """An element of Q(beta), immutable and hashable."""

    __slots__ = ("field", "nums", "den", "_hash")

    def __init__(self, field: PisotField, nums, den=1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        nums = [int(n) for n in nums]
        den = int(den)
        if den < 0:
            nums, den = [-n for n in nums], -den
        g = reduce(math.gcd, nums, den)
        if g > 1:
            nums = [n // g for n in nums]
            den //= g
        self.field = field
        self.nums = tuple(nums)
        self.den = den
        self._hash = None

    # -- representation -------------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def is_integral(self) -> bool:
        return self.den == 1

    def __repr__(self):
        return f"AlgNum({self.render()})"

    def render(self) -> str:
        """Exact text form ``a0,a1,...`` with rational entries."""
        return ",".join(str(c) for c in self.coords)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nums, self.den))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, AlgNum):
            return self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other) -> "AlgNum":
        if isinstance(other, AlgNum):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        raise TypeError(f"cannot combine AlgNum with {type(other).__name__}")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.den == self.den:
            return AlgNum(self.field, [a + b for a, b in zip(self.nums, o.nums)], self.den)
        return AlgNum(
            self.field,
            [a * o.den + b * self.den for a, b in zip(self.nums, o.nums)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(self.field, [-a for a in self.nums], self.den)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return AlgNum(self.field, [a * q.numerator for a in self.nums], self.den * q.denominator)
        if not isinstance(other, AlgNum):
            return NotImplemented
        d = self.field.degree
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.nums):
            if a:
                for j, b in enumerate(other.nums):
                    if b:
                        prod[i + j] += a * b
        return AlgNum(self.field, self.field._reduce(prod), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "AlgNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return self.field.rational(Fraction(self.den, self.nums[0]))
        _, s, _ = poly_xgcd(list(self.nums), list(self.field.minpoly.coefficients))
        return self.field.from_poly(s) * self.den

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / q)
        if not isinstance(other, AlgNum):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- ordering -------------------------------------------------------------------

    def sign(self) -> Sign:
        return sign_of(self)

    def __lt__(self, other):
        return sign_of(self - other) < 0

    def __le__(self, other):
        return sign_of(self - other) <= 0

    def __gt__(self, other):
        return sign_of(self - other) > 0

    def __ge__(self, other):
        return sign_of(self - other) >= 0

    def __floor__(self):
        return floor_of(self)

    def interval(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational bounds containing the real value."""
        a, k = self.field.enclosure(bits)
        lo, hi = _interval_eval(self.nums, a, k)
        scale = self.den << (k * (len(self.nums) - 1))
        return Fraction(lo, scale), Fraction(hi, scale)

    def __float__(self):
        lo, hi = self.interval(80)
        return float((lo + hi) / 2)


def sign_of(a: AlgNum) -> Sign:
    """Exact sign of the real value of ``a`` at beta."""
    if a.is_zero():
        return Sign.ZERO
    if a.is_rational():
        return Sign.POSITIVE if a.nums[0] > 0 else Sign.NEGATIVE
    bits = _START_BITS
    while bits <= _MAX_BITS:
        x, k = a.field.enclosure(bits)
        lo, hi = _interval_eval(a.nums, x, k)
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        bits *= 2
    raise PrecisionExceeded("sign undecided at maximal precision")


def floor_of(a: AlgNum) -> int:
    """The integer n with n <= a < n + 1."""
    if a.is_rational():
        return a.nums[0] // a.den
    lo, hi = a.interval(_START_BITS)
    n = math.floor(lo)
    if math.floor(hi) == n:
        return n
    # the interval straddles an integer; decide that one exactly
    if sign_of(a - (n + 1)) >= 0:
        return n + 1
    return n


def alg_arithmetic(a: AlgNum, b: AlgNum, op: str) -> AlgNum:
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op]()


def _prime_factors(n: int) -> set[int]:
    return set(sympy.factorint(abs(n))) if abs(n) > 1 else set()


def in_z_inv_beta(a: AlgNum) -> bool:
    """Membership in Z[1/beta]."""
    if a.den == 1:
        return True
    norm = a.field.minpoly.coefficients[0]
    allowed = _prime_factors(norm)
    den_primes = _prime_factors(a.den)
    if not den_primes <= allowed:
        return False
    # each multiplication by beta can remove at most the valuation of the norm,
    # and the denominator's valuation grows by at most d steps of slack
    steps = a.field.degree * (a.den.bit_length() + 1)
    x = a
    beta = a.field.beta
    for _ in range(steps):
        x = x * beta
        if x.den == 1:
            return True
    return False


# -- verification ---------------------------------------------------------------------

def _float_roots(coeffs):
    return np.roots(list(reversed([float(c) for c in coeffs])))


def _rational_at_least(x: float, denom: int = 2**24) -> Fraction:
    return Fraction(math.ceil(x * denom), denom)


def _count_inside_radius(coeffs, rho: Fraction):
    scaled = [Fraction(c) * rho**i for i, c in enumerate(coeffs)]
    return schur_cohn_inside(scaled)


def verify_pisot(p) -> PisotField:
    """Certify that ``p`` is the minimal polynomial of a Pisot number."""
    if isinstance(p, str):
        p = parse_polynomial(p)
    elif not isinstance(p, IntPolynomial):
        p = IntPolynomial(tuple(p))
    coeffs = list(p.coefficients)
    if not p.is_monic:
        raise NotMonic(f"{p} is not monic")
    if p.degree > MAX_DEGREE:
        raise DegreeTooLarge(f"degree {p.degree} exceeds {MAX_DEGREE}")
    x = sympy.Symbol("x")
    if p.degree > 1:
        for r in range(-abs(coeffs[0]), abs(coeffs[0]) + 1):
            if r != 0 and coeffs[0] % r == 0 and poly_eval(coeffs, r) == 0:
                raise NotIrreducible(f"{p} has the rational root {r}")
        if coeffs[0] == 0:
            raise NotIrreducible(f"{p} has the rational root 0")
        if not sympy.Poly(list(reversed(coeffs)), x, domain="ZZ").is_irreducible:
            raise NotIrreducible(f"{p} factors over the rationals")

    d = p.degree
    if d == 1:
        root = -coeffs[0]
        if root <= 1:
            raise NotPisot(f"{p} has no root > 1", {"real_roots": [[root, root]]})
        return PisotField(p, root, Fraction(0))

    chain = sturm_chain(coeffs)
    above_one = sturm_count(chain, 1, math.inf)
    below_minus_one = sturm_count(chain, -math.inf, -1)
    if above_one != 1 or below_minus_one:
        intervals = isolate_real_roots(coeffs)
        witness = {
            "real_roots_outside_unit_disk": [
                [str(lo), str(hi)] for lo, hi in intervals if lo >= 1 or hi <= -1
            ],
            "roots_inside_unit_disk": _count_inside_radius(coeffs, Fraction(1)),
        }
        if above_one != 1:
            raise NotPisot(f"{p} has {above_one} real roots above 1", witness)
        raise NotPisot(f"{p} has a real conjugate below -1", witness)

    floor_beta = 1
    while poly_eval(coeffs, floor_beta) * poly_eval(coeffs, floor_beta + 1) > 0:
        floor_beta += 1

    moduli = sorted(abs(z) for z in _float_roots(coeffs))
    theta_guess = moduli[-2]
    candidates = []
    if theta_guess < 1:
        gap = 1 - theta_guess
        for frac in (0.5, 0.25, 0.75, 0.1, 0.9):
            rho = _rational_at_least(theta_guess + frac * gap)
            if rho <= THETA_CEILING:
                candidates.append(rho)
    for rho in candidates:
        if _count_inside_radius(coeffs, rho) == d - 1:
            return PisotField(p, floor_beta, rho)

    witness = {"roots_inside_unit_disk": _count_inside_radius(coeffs, Fraction(1))}
    witness["float_conjugate_moduli"] = [float(m) for m in moduli[:-1]]
    raise NotPisot(f"{p}: conjugates of modulus >= 1 (or too close to 1 to certify)", witness)
