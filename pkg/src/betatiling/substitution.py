"""The beta-substitution read off from the orbit partition of [0, 1]."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import sympy

from . import linalg
from .algebra import AlgNum, PisotField, floor_of, sign_of, verify_pisot
from .errors import BetaTilingError, IntegerBeta, NotPisot, PerronMismatch
from .numeration import KneadingData, kneading_of, parse_digits
from .polynomials import IntPolynomial, charpoly, poly_divmod, poly_xgcd

__all__ = [
    "Prototile",
    "SubstitutionRule",
    "SubstitutionMatrix",
    "PerronData",
    "build_substitution",
    "abelianize_and_perron",
    "verify_language_properties",
    "parse_rule",
    "example_discrepancy_report",
]


@dataclass(frozen=True)
class Prototile:
    index: int
    min: AlgNum
    max: AlgNum

    @property
    def length(self) -> AlgNum:
        return self.max - self.min


@dataclass(frozen=True)
class SubstitutionRule:
    """Letters are 1..n; ``words[i-1]`` is the image of letter i."""

    words: tuple[tuple[int, ...], ...]
    prototiles: tuple[Prototile, ...] = ()
    kneading: KneadingData | None = None
    field: PisotField | None = None
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def alphabet_size(self) -> int:
        return len(self.words)

    def image(self, letter: int) -> tuple[int, ...]:
        return self.words[letter - 1]

    def lengths(self) -> tuple[AlgNum, ...]:
        return tuple(t.length for t in self.prototiles)

    def iterate(self, letter: int, n: int) -> tuple[int, ...]:
        """psi^n(letter), memoized."""
        key = ("it", letter, n)
        if key not in self._cache:
            if n == 0:
                out = (letter,)
            else:
                out = tuple(b for a in self.iterate(letter, n - 1) for b in self.image(a))
            self._cache[key] = out
        return self._cache[key]

    def first_letter(self, letter: int, n: int) -> int:
        for _ in range(n):
            letter = self.image(letter)[0]
        return letter

    def last_letter(self, letter: int, n: int) -> int:
        for _ in range(n):
            letter = self.image(letter)[-1]
        return letter

    def render(self) -> str:
        return "; ".join(
            f"{i}->{''.join(str(c) for c in w) if self.alphabet_size < 10 else ','.join(map(str, w))}"
            for i, w in enumerate(self.words, 1)
        )

    def __str__(self) -> str:
        return self.render()


def parse_rule(text: str) -> SubstitutionRule:
    """Parse ``"1->121; 2->21"`` into a bare rule (no geometry)."""
    words = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        lhs, _, rhs = part.partition("->")
        rhs = rhs.strip()
        w = tuple(int(c) for c in (rhs.split(",") if "," in rhs else rhs))
        words[int(lhs)] = w
    n = max(words)
    return SubstitutionRule(tuple(words[i] for i in range(1, n + 1)))


def build_substitution(k: KneadingData, f: PisotField | None = None) -> SubstitutionRule:
    f = f or k.field
    if f.degree == 1:
        raise IntegerBeta("beta is an integer; the tiling space is a circle")
    points = sorted(set(k.orbit) | {f.zero, f.one}, key=_SortKey)
    tiles = tuple(Prototile(i, points[i - 1], points[i]) for i in range(1, len(points)))
    index_of_min = {t.min: t.index for t in tiles}
    words = []
    for t in tiles:
        lo, hi = t.min * f.beta, t.max * f.beta
        word = []
        cell = floor_of(lo)
        while sign_of(hi - cell) > 0:
            a = lo - cell if sign_of(lo - cell) > 0 else f.zero
            b = hi - cell if sign_of(hi - cell - 1) < 0 else f.one
            # [a, b] must be a union of consecutive prototiles
            if a not in index_of_min:
                raise PerronMismatch(f"image endpoint {a.render()} is not a breakpoint")
            j = index_of_min[a]
            while True:
                word.append(j)
                if tiles[j - 1].max == b:
                    break
                if sign_of(tiles[j - 1].max - b) > 0:
                    raise PerronMismatch(f"image endpoint {b.render()} is not a breakpoint")
                j += 1
            cell += 1
        words.append(tuple(word))
    return SubstitutionRule(tuple(words), tiles, k, f)


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return sign_of(self.v - other.v) < 0


@dataclass(frozen=True)
class SubstitutionMatrix:
    """Counts ``a[i][j]`` = occurrences of letter j+1 in the image of letter i+1."""

    entries: tuple[tuple[int, ...], ...]

    @property
    def abelianization(self) -> tuple[tuple[int, ...], ...]:
        """The transpose: the linear map sending a letter count vector to that of its image."""
        return tuple(zip(*self.entries))

    def tolist(self):
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class PerronData:
    char_poly: IntPolynomial
    q_factor: tuple[int, ...]
    l: tuple[AlgNum, ...]
    omega: tuple[AlgNum, ...]


def _matrix_of(rule: SubstitutionRule) -> SubstitutionMatrix:
    n = rule.alphabet_size
    rows = []
    for w in rule.words:
        row = [0] * n
        for c in w:
            row[c - 1] += 1
        rows.append(tuple(row))
    return SubstitutionMatrix(tuple(rows))


def is_primitive(matrix) -> bool:
    n = len(matrix)
    pos = [[bool(x) for x in row] for row in matrix]
    power = pos
    for _ in range(n * n - 2 * n + 2):
        if all(all(r) for r in power):
            return True
        power = [[any(power[i][t] and pos[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return all(all(r) for r in power)


def abelianize_and_perron(rule: SubstitutionRule, f: PisotField | None = None):
    f = f or rule.field
    a = _matrix_of(rule)
    m = a.abelianization
    cp = charpoly(a.entries)
    pb = list(f.minpoly.coefficients)
    quo, rem = poly_divmod(cp, pb)
    if any(rem):
        raise PerronMismatch(f"minimal polynomial does not divide {IntPolynomial(tuple(cp))}")
    q = [int(c) for c in quo]
    g, _, _ = poly_xgcd(pb, q)
    if len(g) > 1:
        raise PerronMismatch("beta is not a simple eigenvalue")
    lengths = rule.lengths()
    beta = f.beta
    n = rule.alphabet_size
    for j in range(n):
        lhs = sum((lengths[i] * m[i][j] for i in range(n)), f.zero)
        if lhs != beta * lengths[j]:
            raise PerronMismatch("prototile lengths are not a left eigenvector")
    shifted = [[f.rational(m[i][j]) - (beta if i == j else 0) for j in range(n)] for i in range(n)]
    kernel = linalg.nullspace(shifted, f)
    if len(kernel) != 1:
        raise PerronMismatch(f"eigenspace of beta has dimension {len(kernel)}")
    omega = kernel[0]
    norm = sum((x * y for x, y in zip(lengths, omega)), f.zero)
    omega = tuple(x / norm for x in omega)
    perron = PerronData(IntPolynomial(tuple(cp)), tuple(q), lengths, omega)
    return a, perron, is_primitive(m)


def _two_letter_factors(rule: SubstitutionRule, depth: int) -> set[tuple[int, int]]:
    n = rule.alphabet_size
    first = [rule.image(i)[0] for i in range(1, n + 1)]
    last = [rule.image(i)[-1] for i in range(1, n + 1)]
    inner = {i: {(w[j], w[j + 1]) for j in range(len(w) - 1)} for i, w in enumerate(rule.words, 1)}
    total = set()
    for start in range(1, n + 1):
        letters = {start}
        pairs: set = set()
        for _ in range(depth):
            new_pairs = set()
            for c in letters:
                new_pairs |= inner[c]
            for a, b in pairs:
                new_pairs.add((last[a - 1], first[b - 1]))
            letters = {c for x in letters for c in rule.image(x)}
            pairs = new_pairs
            total |= pairs
    return total


def verify_language_properties(rule: SubstitutionRule, depth: int = 6) -> dict:
    """Check the three two-letter-factor properties on images of depth <= ``depth``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    factors = sorted(_two_letter_factors(rule, depth))
    report = {"depth": depth, "factors": ["".join(map(str, ab)) for ab in factors]}

    bad1 = [(a, b) for a, b in factors if b != 1 and a != b - 1]
    report["property_1"] = {"holds": not bad1, "offending": _fmt(bad1)}

    bad2 = [
        ((a, b), (a2, c))
        for a, b in factors
        for a2, c in factors
        if a == a2 and b < c and b != 1 and c != 1
    ]
    report["property_2"] = {"holds": not bad2, "offending": [_fmt(x) for x in bad2]}

    bad3 = [
        ((a, c), (b, c2))
        for a, c in factors
        for b, c2 in factors
        if c == c2 and a < b and c != 1
    ]
    report["property_3"] = {"holds": not bad3, "offending": [_fmt(x) for x in bad3]}
    return report


def _fmt(pairs):
    return ["".join(map(str, ab)) for ab in pairs]


def example_discrepancy_report() -> dict:
    """Compare a published four-letter rule against the construction from its stated digits."""
    words = "1->12; 2->34; 3->2341; 4->23"
    stated = "22(01)"
    rule = parse_rule(words)
    cp = charpoly(_matrix_of(rule).entries)
    pre, period = parse_digits(stated)
    digits = pre + period
    m, p = len(pre), len(period)
    # beta^(m+p) - sum_{i<=m+p} c_i beta^(m+p-i)  ==  beta^m - sum_{i<=m} c_i beta^(m-i)
    left = [0] * (m + p + 1)
    left[m + p] += 1
    for i, c in enumerate(digits, 1):
        left[m + p - i] -= c
    right = [0] * (m + 1)
    right[m] += 1
    for i, c in enumerate(pre, 1):
        right[m - i] -= c
    forced = [left[i] - (right[i] if i < len(right) else 0) for i in range(len(left))]
    forced_poly = IntPolynomial(tuple(forced))
    consistent = False
    try:
        ff = verify_pisot(forced_poly)
        forced_verdict = "Pisot"
        built = build_substitution(kneading_of(ff), ff)
        consistent = built.words == rule.words
    except NotPisot as exc:
        forced_verdict = f"NotPisot: {exc}"
    except BetaTilingError as exc:
        forced_verdict = f"{type(exc).__name__}: {exc}"
    x = sympy.Symbol("x")
    factors = sympy.factor_list(sympy.Poly(list(reversed(cp)), x).as_expr())
    return {
        "stated_words": words,
        "stated_kneading": stated,
        "word_char_poly": str(IntPolynomial(tuple(cp))),
        "word_char_poly_factors": [str(fac) for fac, _ in factors[1]],
        "forced_polynomial": str(forced_poly),
        "forced_polynomial_verdict": forced_verdict,
        "consistent": consistent,
    }
