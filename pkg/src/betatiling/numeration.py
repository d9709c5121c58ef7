"""The beta-transformation, greedy expansions and the kneading sequence of 1."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .algebra import AlgNum, PisotField, floor_of, in_z_inv_beta, sign_of
from .errors import (
    InvalidInterval,
    IterationBudgetExceeded,
    NotInZInvBeta,
    OutOfRange,
)

__all__ = [
    "DEFAULT_CAP",
    "KneadingData",
    "BetaExpansion",
    "Finite",
    "Infinite",
    "Witness",
    "NotFound",
    "format_digits",
    "parse_digits",
    "t_beta_step",
    "t_beta_orbit",
    "kneading_of",
    "greedy_expansion",
    "is_admissible",
    "fin_membership",
    "property_w_witness",
    "digit_value",
]

DEFAULT_CAP = 10_000


def _join(digits: Sequence[int]) -> str:
    sep = "," if any(d > 9 for d in digits) else ""
    return sep.join(str(d) for d in digits)


def format_digits(pre: Sequence[int], period: Sequence[int] = ()) -> str:
    """Render ``pre(period)``; finite words carry no parentheses."""
    out = _join(pre)
    if period:
        out += f"({_join(period)})"
    return out


def parse_digits(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    def split(s):
        s = s.strip()
        if not s:
            return ()
        if "," in s:
            return tuple(int(x) for x in s.split(",") if x.strip())
        return tuple(int(ch) for ch in s)

    if "(" in text:
        head, _, rest = text.partition("(")
        body, _, tail = rest.partition(")")
        if tail.strip():
            raise ValueError(f"trailing text after period in {text!r}")
        return split(head), split(body)
    return split(text), ()


def digit_value(f: PisotField, digits: Sequence[int], start: int = 1) -> AlgNum:
    """Sum of digits[j] * beta^-(start + j)."""
    acc = f.zero
    for d in reversed(digits):
        acc = (acc + d) * f.beta_power(-1)
    return acc * f.beta_power(1 - start)


def t_beta_step(f: PisotField, x: AlgNum) -> tuple[int, AlgNum]:
    if sign_of(x) < 0 or sign_of(x - 1) >= 0:
        raise OutOfRange(f"{x.render()} is not in [0, 1)")
    y = x * f.beta
    digit = floor_of(y)
    return digit, y - digit


def t_beta_orbit(f: PisotField, x: AlgNum, n: int) -> Iterator[tuple[int, AlgNum]]:
    """Yield ``(digit, T(x))`` pairs for n steps; no range check after the first."""
    y = x
    for _ in range(n):
        z = y * f.beta
        digit = floor_of(z)
        y = z - digit
        yield digit, y


@dataclass(frozen=True)
class KneadingData:
    """Quasi-greedy kneading sequence of 1 with its orbit z^1 = 1, z^2, ..."""

    field: PisotField
    m: int
    p: int
    digits: tuple[int, ...]
    orbit: tuple[AlgNum, ...]

    @property
    def preperiod(self) -> tuple[int, ...]:
        return self.digits[: self.m]

    @property
    def period(self) -> tuple[int, ...]:
        return self.digits[self.m :]

    @property
    def simple(self) -> bool:
        return self.m == 0

    def digit(self, i: int) -> int:
        """c_i for i >= 1 in the infinite stream."""
        if i <= self.m:
            return self.digits[i - 1]
        return self.digits[self.m + (i - 1 - self.m) % self.p]

    def stream(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(1, n + 1))

    def value(self) -> AlgNum:
        """Closed form of sum c_i beta^-i; equals 1."""
        f = self.field
        head = digit_value(f, self.preperiod)
        cycle = digit_value(f, self.period)
        return head + f.beta_power(-self.m) * cycle / (1 - f.beta_power(-self.p))

    def render(self) -> str:
        return format_digits(self.preperiod, self.period)

    def __str__(self) -> str:
        return self.render()


def kneading_of(f: PisotField, cap: int = DEFAULT_CAP) -> KneadingData:
    orbit = [f.one]
    seen = {f.one: 1}
    digits = []
    z = f.one
    for j in range(2, cap + 2):
        y = z * f.beta
        c = floor_of(y)
        z = y - c
        digits.append(c)
        if z.is_zero():
            # simple Parry number: switch to the quasi-greedy periodic form
            n = len(digits)
            return KneadingData(f, 0, n, tuple(digits[:-1]) + (digits[-1] - 1,), tuple(orbit))
        if z in seen:
            i = seen[z]
            return KneadingData(f, i - 1, j - i, tuple(digits), tuple(orbit))
        seen[z] = j
        orbit.append(z)
    raise IterationBudgetExceeded(f"orbit of 1 did not close within {cap} steps")


@dataclass(frozen=True)
class BetaExpansion:
    """Greedy expansion: integer part digits (x_{-k+1}..x_0) then fractional digits.

    The fractional part is ``preperiod`` followed by ``period`` repeated; an
    empty period means the expansion is finite.
    """

    field: PisotField
    integer_digits: tuple[int, ...]
    preperiod: tuple[int, ...]
    period: tuple[int, ...] = ()

    @property
    def finite(self) -> bool:
        return not self.period

    def value(self) -> AlgNum:
        f = self.field
        whole = f.zero
        for d in self.integer_digits:
            whole = whole * f.beta + d
        frac = digit_value(f, self.preperiod)
        if self.period:
            n = len(self.preperiod)
            frac = frac + f.beta_power(-n) * digit_value(f, self.period) / (
                1 - f.beta_power(-len(self.period))
            )
        return whole + frac

    def fractional_stream(self, n: int) -> tuple[int, ...]:
        out = list(self.preperiod[:n])
        while len(out) < n:
            if not self.period:
                out.append(0)
            else:
                out.append(self.period[(len(out) - len(self.preperiod)) % len(self.period)])
        return tuple(out)

    def render(self) -> str:
        frac = format_digits(self.preperiod, self.period)
        if self.integer_digits:
            return f"{_join(self.integer_digits)}.{frac}"
        return frac


def greedy_expansion(f: PisotField, x: AlgNum, cap: int = DEFAULT_CAP) -> BetaExpansion:
    if sign_of(x) < 0:
        raise OutOfRange("greedy expansions need x >= 0")
    if x.is_zero():
        return BetaExpansion(f, (), ())
    k = 0
    y = x
    binv = f.beta_power(-1)
    while sign_of(y - 1) >= 0:
        y = y * binv
        k += 1
    digits = []
    seen = {y: 0}
    for step in range(1, cap + 1):
        z = y * f.beta
        c = floor_of(z)
        y = z - c
        digits.append(c)
        if y.is_zero():
            start, period = len(digits), ()
            break
        if y in seen:
            start = seen[y]
            period = tuple(digits[start:])
            break
        seen[y] = step
    else:
        raise IterationBudgetExceeded(f"no cycle within {cap} steps")
    pre = digits[:start]
    # unroll the cycle until the integer part is covered
    while len(pre) < k:
        if period:
            pre.append(period[0])
            period = period[1:] + period[:1]
        else:
            pre.append(0)
    return BetaExpansion(f, tuple(pre[:k]), tuple(pre[k:]), period)


def is_admissible(k: KneadingData, w: Sequence[int]) -> bool:
    """Every suffix of w is lexicographically <= the quasi-greedy kneading stream."""
    ref = k.stream(len(w))
    n = len(w)
    for s in range(n):
        for j in range(n - s):
            a, b = w[s + j], ref[j]
            if a != b:
                if a > b:
                    return False
                break
    return True


@dataclass(frozen=True)
class Finite:
    expansion: BetaExpansion


@dataclass(frozen=True)
class Infinite:
    expansion: BetaExpansion


def fin_membership(f: PisotField, x: AlgNum, cap: int = DEFAULT_CAP):
    e = greedy_expansion(f, x, cap)
    return Finite(e) if e.finite else Infinite(e)


@dataclass(frozen=True)
class Witness:
    t: AlgNum
    digits: tuple[int, ...]
    candidates: int


@dataclass(frozen=True)
class NotFound:
    candidates: int


def _admissible_words(k: KneadingData, top: int, length: int, lo, hi, f: PisotField):
    """Admissible words of exact length with last digit nonzero whose values may land in (lo, hi).

    Lexicographic order.  The value of any admissible continuation after j
    digits lies in [v, v + beta^-j), which drives the pruning.
    """
    ref = k.stream(length)
    powers = [f.beta_power(-j) for j in range(length + 1)]

    def rec(word, value):
        j = len(word)
        if sign_of(value - hi) >= 0 or sign_of(value + powers[j] - lo) <= 0:
            return
        if j == length:
            if word and word[-1] != 0:
                yield tuple(word), value
            return
        for d in range(top + 1):
            word.append(d)
            if _suffixes_ok(word, ref):
                yield from rec(word, value + d * powers[j + 1])
            word.pop()

    yield from rec([], f.zero)


def _suffixes_ok(word, ref) -> bool:
    # only suffixes touching the new last letter can become inadmissible,
    # and only those still tied with the reference up to that letter
    n = len(word)
    for s in range(n):
        ok = True
        for j in range(n - s):
            a, b = word[s + j], ref[j]
            if a != b:
                ok = a < b
                break
        if not ok:
            return False
    return True


def property_w_witness(
    f: PisotField,
    z: AlgNum,
    lo,
    hi,
    budget: int = 100_000,
    kneading: KneadingData | None = None,
    max_length: int = 64,
):
    """Search t' in Fin(beta) with lo < t' < hi and z + t' in Fin(beta)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise InvalidInterval(f"empty interval ({lo}, {hi})")
    if not in_z_inv_beta(z):
        raise NotInZInvBeta(f"{z.render()} is not in Z[1/beta]")
    if sign_of(z) <= 0:
        raise OutOfRange("z must be positive")
    k = kneading or kneading_of(f)
    top = floor_of(f.beta)
    count = 0
    for length in range(1, max_length + 1):
        for word, value in _admissible_words(k, top, length, lo, hi, f):
            if not (sign_of(value - lo) > 0 and sign_of(value - hi) < 0):
                continue
            if count >= budget:
                return NotFound(count)
            count += 1
            if isinstance(fin_membership(f, z + value), Finite):
                return Witness(value, word, count)
    return NotFound(count)
