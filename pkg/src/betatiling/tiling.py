"""Exact tilings of the line generated by a beta-substitution.

A :class:`SubstitutiveTiling` is ``F(a, b) - t``: the bi-infinite word
``lim psi^(nq)(a) . psi^(nq)(b)`` laid out with the a-tile ending at 0 and
the b-tile starting at 0, then translated by ``-t``.  Windows are produced by
descending through cached supertiles, so every tile position is exact.

Half-open convention throughout: the tile "containing" x is the one with
``start <= x < end``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import AlgNum, floor_of, sign_of
from .substitution import SubstitutionRule, _two_letter_factors

__all__ = [
    "Tile",
    "Patch",
    "TileState",
    "SubstitutiveTiling",
    "Coincides",
    "Unknown",
    "Asymptotic",
    "Diverges",
    "canonical_periodic_tilings",
    "window",
    "locate",
    "substitute_tiling",
    "translate_tiling",
    "stable_equiv_test",
    "dense_stable_scan",
    "asymptotic_test",
    "anchor",
    "digit_itinerary",
    "spectrum_certificate",
]


@dataclass(frozen=True)
class Tile:
    """A translate of prototile ``type_index`` with support [start, end]."""

    type_index: int
    start: AlgNum
    end: AlgNum

    def offset(self, rule: SubstitutionRule) -> AlgNum:
        return self.start - rule.prototiles[self.type_index - 1].min

    def translate(self, t) -> "Tile":
        return Tile(self.type_index, self.start - t, self.end - t)

    def render(self) -> str:
        return f"{self.type_index}@[{self.start.render()};{self.end.render()}]"


@dataclass(frozen=True)
class Patch:
    tiles: tuple[Tile, ...]

    def __post_init__(self):
        for a, b in zip(self.tiles, self.tiles[1:]):
            if a.end != b.start:
                raise ValueError("tiles in a patch must abut")

    def __len__(self):
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    def __getitem__(self, i):
        return self.tiles[i]

    def word(self) -> tuple[int, ...]:
        return tuple(t.type_index for t in self.tiles)

    def translate(self, t) -> "Patch":
        return Patch(tuple(x.translate(t) for x in self.tiles))


@dataclass(frozen=True)
class TileState:
    """The tile containing the origin: its type and the origin's offset into it."""

    letter: int
    inset: AlgNum


@dataclass(frozen=True)
class SubstitutiveTiling:
    rule: SubstitutionRule
    left: int
    right: int
    power: int
    translation: AlgNum
    label: str = ""

    def __post_init__(self):
        r = self.rule
        if r.last_letter(self.left, self.power) != self.left:
            raise ValueError(f"letter {self.left} is not fixed on the left by psi^{self.power}")
        if r.first_letter(self.right, self.power) != self.right:
            raise ValueError(f"letter {self.right} is not fixed on the right by psi^{self.power}")

    @property
    def field(self):
        return self.rule.field

    def seed(self) -> str:
        return f"{self.left}|{self.right}"

    def __repr__(self):
        name = self.label or self.seed()
        return f"SubstitutiveTiling({name}, t={self.translation.render()})"

    def same_tiling(self, other: "SubstitutiveTiling") -> bool:
        """Equality of seeds and translation (a sufficient test for equal tilings)."""
        return (
            self.left == other.left
            and self.right == other.right
            and self.translation == other.translation
            and self.rule.words == other.rule.words
        )


# -- supertile geometry ------------------------------------------------------------------

def _super_lengths(rule: SubstitutionRule, n: int) -> tuple[AlgNum, ...]:
    """Lengths beta^n * l_j of the level-n supertiles."""
    key = ("len", n)
    cache = rule._cache
    if key not in cache:
        if n == 0:
            cache[key] = rule.lengths()
        else:
            prev = _super_lengths(rule, n - 1)
            cache[key] = tuple(
                sum((prev[c - 1] for c in rule.image(j)), rule.field.zero)
                for j in range(1, rule.alphabet_size + 1)
            )
    return cache[key]


def _seed_supertile(T: SubstitutiveTiling, y: AlgNum, span: AlgNum | None = None):
    """A level-N supertile of F(a, b) containing y (and y + span, if given)."""
    rule, q = T.rule, T.power
    n = 0
    far = y if span is None else y + span
    while True:
        lens = _super_lengths(rule, n)
        la, lb = lens[T.left - 1], lens[T.right - 1]
        ok_right = sign_of(far - lb) < 0
        ok_left = sign_of(y + la) >= 0
        if ok_right and ok_left:
            return n, la, lb
        n += q


def _descend(rule, letter, level, start, lo, hi, out):
    """Append tiles of the level-``level`` supertile at ``start`` meeting (lo, hi) with positive length."""
    if level == 0:
        out.append(Tile(letter, start, start + rule.lengths()[letter - 1]))
        return
    lens = _super_lengths(rule, level - 1)
    pos = start
    for c in rule.image(letter):
        end = pos + lens[c - 1]
        if sign_of(end - lo) > 0 and sign_of(pos - hi) < 0:
            _descend(rule, c, level - 1, pos, lo, hi, out)
        elif sign_of(pos - hi) >= 0:
            break
        pos = end


def window(T: SubstitutiveTiling, lo, hi) -> Patch:
    """Tiles of T whose supports overlap [lo, hi] with positive length (or contain lo when lo == hi)."""
    f = T.field
    lo = lo if isinstance(lo, AlgNum) else f.rational(lo)
    hi = hi if isinstance(hi, AlgNum) else f.rational(hi)
    if sign_of(hi - lo) < 0:
        raise ValueError("window needs lo <= hi")
    if lo == hi:
        return Patch((locate(T, lo),))
    ylo, yhi = lo + T.translation, hi + T.translation
    n, la, lb = _seed_supertile(T, ylo, yhi - ylo)
    out: list[Tile] = []
    if sign_of(ylo) < 0:
        _descend(T.rule, T.left, n, -la, ylo, yhi, out)
    if sign_of(yhi) > 0:
        _descend(T.rule, T.right, n, f.zero, ylo, yhi, out)
    return Patch(tuple(t.translate(T.translation) for t in out))


def locate(T: SubstitutiveTiling, x) -> Tile:
    """The tile of T with start <= x < end."""
    f = T.field
    x = x if isinstance(x, AlgNum) else f.rational(x)
    y = x + T.translation
    n, la, lb = _seed_supertile(T, y)
    rule = T.rule
    if sign_of(y) < 0:
        letter, start = T.left, -la
    else:
        letter, start = T.right, f.zero
    for level in range(n, 0, -1):
        lens = _super_lengths(rule, level - 1)
        pos = start
        for c in rule.image(letter):
            end = pos + lens[c - 1]
            if sign_of(y - end) < 0:
                letter, start = c, pos
                break
            pos = end
    tile = Tile(letter, start, start + rule.lengths()[letter - 1])
    return tile.translate(T.translation)


def state_at_origin(T: SubstitutiveTiling) -> TileState:
    tile = locate(T, T.field.zero)
    return TileState(tile.type_index, -tile.start)


def substitute_tiling(T: SubstitutiveTiling, n: int = 1) -> SubstitutiveTiling:
    """Psi^n(T) for any integer n (seeds advance, the translation scales by beta^n)."""
    rule = T.rule
    k = n % T.power
    return SubstitutiveTiling(
        rule,
        rule.last_letter(T.left, k),
        rule.first_letter(T.right, k),
        T.power,
        T.translation * T.field.beta_power(n),
        T.label,
    )


def translate_tiling(T: SubstitutiveTiling, t) -> SubstitutiveTiling:
    """T - t: the tiling whose tile at s is the tile of T at s + t."""
    return SubstitutiveTiling(T.rule, T.left, T.right, T.power, T.translation + t, T.label)


# -- dynamics of the tile at the origin -----------------------------------------------------

def step_state(rule: SubstitutionRule, s: TileState) -> tuple[TileState, int]:
    """Tile at the origin of Psi(T) from that of T; also returns the child index."""
    lens = rule.lengths()
    v = s.inset * rule.field.beta
    for k, c in enumerate(rule.image(s.letter)):
        nxt = v - lens[c - 1]
        if sign_of(nxt) < 0:
            return TileState(c, v), k
        v = nxt
    raise AssertionError("origin escaped the substituted tile")


def anchor(rule: SubstitutionRule, s: TileState) -> AlgNum:
    """-t_*(T): distance from the last type-1 tile start (<= 0) to the origin."""
    return rule.prototiles[s.letter - 1].min + s.inset


# -- comparisons --------------------------------------------------------------------------------

@dataclass(frozen=True)
class Coincides:
    k: int


@dataclass(frozen=True)
class Unknown:
    budget: int


def stable_equiv_test(T: SubstitutiveTiling, T2: SubstitutiveTiling, t, K: int):
    """Smallest k <= K with equal tiles at the origin in Psi^k(T - t) and Psi^k(T2 - t)."""
    if K < 0:
        raise ValueError("K must be >= 0")
    rule = T.rule
    s1 = state_at_origin(translate_tiling(T, t))
    s2 = state_at_origin(translate_tiling(T2, t))
    for k in range(K + 1):
        if s1 == s2:
            return Coincides(k)
        if k < K:
            s1, _ = step_state(rule, s1)
            s2, _ = step_state(rule, s2)
    return Unknown(K)


def _grid_points(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    # cell midpoints: rational, never a tile vertex of a periodic tiling
    return [lo + (j + Fraction(1, 2)) * (hi - lo) / n for j in range(n)]


def dense_stable_scan(T, T2, lo=0, hi=1, grid: int = 64, K: int = 60) -> dict:
    if grid < 1:
        raise ValueError("grid must be >= 1")
    lo, hi = Fraction(lo), Fraction(hi)
    failures = []
    ks = []
    for t in _grid_points(lo, hi, grid):
        r = stable_equiv_test(T, T2, T.field.rational(t), K)
        if isinstance(r, Coincides):
            ks.append(r.k)
        else:
            failures.append(str(t))
    return {
        "grid": grid,
        "budget": K,
        "interval": [str(lo), str(hi)],
        "fraction": (grid - len(failures)) / grid,
        "max_k": max(ks) if ks else None,
        "failures": failures,
    }


@dataclass(frozen=True)
class Asymptotic:
    t0: AlgNum
    horizon: AlgNum
    agree_everywhere: bool = False


@dataclass(frozen=True)
class Diverges:
    witness: AlgNum
    horizon: AlgNum


def asymptotic_test(T, T2, horizon):
    """Compare T and T2 on [0, horizon]; t0 is the last point of disagreement."""
    f = T.field
    H = horizon if isinstance(horizon, AlgNum) else f.rational(horizon)
    if sign_of(H) <= 0:
        raise ValueError("horizon must be positive")
    p1 = list(window(T, f.zero, H))
    p2 = list(window(T2, f.zero, H))
    # walk both patches in step; tiles agree exactly when type and start agree
    i = j = 0
    last = None
    while i < len(p1) and j < len(p2):
        a, b = p1[i], p2[j]
        if a != b:
            end = a.end if sign_of(a.end - b.end) <= 0 else b.end
            last = end
        c = sign_of(a.end - b.end)
        if c <= 0:
            i += 1
        if c >= 0:
            j += 1
    if last is None:
        return Asymptotic(f.zero, H, agree_everywhere=True)
    if sign_of(last * 2 - H) > 0:
        return Diverges(last, H)
    return Asymptotic(last, H)


# -- canonical tilings ----------------------------------------------------------------------------

def canonical_periodic_tilings(rule: SubstitutionRule) -> list[SubstitutiveTiling]:
    """T_i and T_i^0 for i = 1..p when m > 0; otherwise all Psi^p-fixed seeds (a | 1)."""
    k = rule.kneading
    m, p = k.m, k.p
    tiles = rule.prototiles
    out = []
    zero = rule.field.zero
    if m > 0:
        for i in range(1, p + 1):
            z = k.orbit[m + i - 1]
            minus = next(t.index for t in tiles if t.max == z)
            plus = next(t.index for t in tiles if t.min == z)
            out.append(SubstitutiveTiling(rule, minus, plus, p, zero, f"T_{i}"))
            out.append(SubstitutiveTiling(rule, minus, 1, p, zero, f"T_{i}^0"))
        return out
    factors = _two_letter_factors(rule, 2 * rule.alphabet_size + 2)
    for a in range(1, rule.alphabet_size + 1):
        if (a, 1) in factors and rule.last_letter(a, p) == a:
            out.append(SubstitutiveTiling(rule, a, 1, p, zero, f"F_{a}"))
    return out


# -- itineraries --------------------------------------------------------------------------------------

def digit_itinerary(T: SubstitutiveTiling, i_lo: int, i_hi: int, verify: bool = False) -> list[int]:
    """x_i(T) = floor(-beta t_*(Psi^i T)) for i_lo <= i <= i_hi.

    With ``verify`` every anchor is recomputed from a fresh window of
    Psi^i(T) and checked against the T_beta recursion.
    """
    if i_lo > i_hi:
        raise ValueError("need i_lo <= i_hi")
    rule = T.rule
    f = T.field
    s = state_at_origin(substitute_tiling(T, i_lo))
    digits = []
    for i in range(i_lo, i_hi + 1):
        g = anchor(rule, s)
        if verify:
            direct = _anchor_by_window(substitute_tiling(T, i))
            if direct != g:
                raise AssertionError(f"anchor mismatch at i={i}")
        y = g * f.beta
        x = floor_of(y)
        digits.append(x)
        if i < i_hi:
            s, _ = step_state(rule, s)
            if verify and anchor(rule, s) != y - x:
                raise AssertionError(f"T_beta recursion fails at i={i}")
    return digits


def _anchor_by_window(T: SubstitutiveTiling) -> AlgNum:
    f = T.field
    patch = window(T, -f.one, f.zero)
    here = locate(T, f.zero)
    starts = [t.start for t in patch if t.type_index == 1 and sign_of(t.start) <= 0]
    if here.type_index == 1 and sign_of(here.start) <= 0:
        starts.append(here.start)
    best = max(starts, key=_Key)
    return -best


class _Key:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return sign_of(self.v - other.v) < 0


def spectrum_certificate(rule: SubstitutionRule, grid: int = 64, K: int = 60) -> dict:
    """Dense stable-equivalence scan on [0, 1] over all pairs of canonical tilings."""
    family = canonical_periodic_tilings(rule)
    pairs = []
    ok = True
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            rep = dense_stable_scan(family[i], family[j], 0, 1, grid, K)
            rep["pair"] = [family[i].label, family[j].label]
            pairs.append(rep)
            ok = ok and not rep["failures"]
    return {
        "tilings": [t.label for t in family],
        "grid": grid,
        "budget": K,
        "pairs": pairs,
        "verdict": "Certified" if ok else "Inconclusive",
    }


def patches_allowed(rule: SubstitutionRule, patch: Iterable[Tile], depth: int = 12) -> bool:
    """Whether the patch word occurs inside psi^n(letter) for some n <= depth."""
    word = tuple(t.type_index for t in patch)
    for n in range(depth + 1):
        for a in range(1, rule.alphabet_size + 1):
            w = rule.iterate(a, n)
            if len(w) < len(word):
                continue
            for s in range(len(w) - len(word) + 1):
                if w[s : s + len(word)] == word:
                    return True
    return False
