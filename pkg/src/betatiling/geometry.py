"""Pisot subspace, the lattice Gamma, the factor map onto the torus, and arithmetical coding.

Torus points are kept in Gamma-basis coordinates, so reduction modulo Gamma is
reduction of each coordinate modulo 1.  Coordinates are exact elements of
Q(beta); when an infinite series had to be truncated the point also carries a
certified radius bounding the neglected tail in every coordinate.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import AlgNum, PisotField, floor_of, sign_of
from .errors import Inadmissible, NotCoprime, NotFundamental, PrecisionExceeded
from .numeration import KneadingData, is_admissible
from .polynomials import charpoly, poly_xgcd
from .substitution import PerronData, SubstitutionMatrix, SubstitutionRule
from .tiling import (
    SubstitutiveTiling,
    TileState,
    anchor,
    state_at_origin,
    step_state,
    substitute_tiling,
    window,
)

__all__ = [
    "SplittingData",
    "TorusPoint",
    "SolenoidPoint",
    "PrefixRecord",
    "TwoSidedDigits",
    "compute_splitting",
    "project_components",
    "fundamental_homoclinic",
    "shadow_factor_map",
    "solenoid_map",
    "prefix_records",
    "tiling_digits",
    "arithmetical_code",
    "digits_from_expansion",
    "coding_consistency_and_injectivity",
    "rauzy_cloud",
]

DEFAULT_TOLERANCE = Fraction(1, 10**10)


def _intmatvec(m, v):
    return [sum(a * b for a, b in zip(row, v)) for row in m]


def _algmatvec(m, v, zero):
    """Rational/integer matrix times a vector of AlgNums."""
    return [sum((a * b for a, b in zip(row, v) if a), zero) for row in m]


@dataclass(frozen=True)
class SplittingData:
    field: PisotField
    M: tuple[tuple[int, ...], ...]  # abelianization: count vector -> count vector of the image
    pi_V: tuple[tuple[Fraction, ...], ...]
    gamma_basis: tuple[tuple[Fraction, ...], ...]  # n x d, columns span Gamma
    P: tuple[tuple[int, ...], ...]  # d x n, Gamma-coordinates of pi_V(e_j)
    L: tuple[tuple[int, ...], ...]  # d x d, M restricted to V in Gamma-coordinates
    l_vec: tuple[AlgNum, ...]
    omega_vec: tuple[AlgNum, ...]
    omega_gamma: tuple[AlgNum, ...]
    l_gamma: tuple[AlgNum, ...]
    q_factor: tuple[int, ...]
    s1: tuple[Fraction, ...]
    s2: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.M)

    @property
    def d(self) -> int:
        return len(self.L)

    def gamma_coords(self, counts: Sequence[int]) -> list[int]:
        """Gamma-coordinates of pi_V applied to an integer vector."""
        return _intmatvec(self.P, counts)

    def length_of(self, counts: Sequence[int]) -> AlgNum:
        return sum((self.l_vec[j] * c for j, c in enumerate(counts) if c), self.field.zero)

    def L_power(self, k: int):
        key = k
        cache = _LPOW.setdefault(id(self), {0: linalg.identity(self.d)})
        if key not in cache:
            prev = self.L_power(k - 1)
            cache[key] = linalg.matmul(self.L, prev)
        return cache[key]

    def stable_part(self, gamma_int: Sequence[int], length: AlgNum, k: int = 0) -> list[AlgNum]:
        """Gamma-coordinates of L^k v^s for v in Gamma with <l, v> = length."""
        f = self.field
        lv = _intmatvec(self.L_power(k), gamma_int)
        scale = length * f.beta_power(k)
        return [f.rational(a) - scale * w for a, w in zip(lv, self.omega_gamma)]

    def geometric_inverse(self, q: int):
        """(I - L^q)^(-1) over Q."""
        key = ("geo", q)
        cache = _LPOW.setdefault(id(self), {0: linalg.identity(self.d)})
        if key not in cache:
            lq = self.L_power(q)
            cache[key] = linalg.inverse(
                [[int(i == j) - lq[i][j] for j in range(self.d)] for i in range(self.d)]
            )
        return cache[key]

    def omega_sup(self) -> Fraction:
        """Rational upper bound on max |omega_gamma_k|."""
        best = Fraction(0)
        for w in self.omega_gamma:
            lo, hi = w.interval(64)
            best = max(best, abs(lo), abs(hi))
        return best


_LPOW: dict = {}


def compute_splitting(A: SubstitutionMatrix, f: PisotField, perron: PerronData) -> SplittingData:
    M = A.abelianization
    n = len(M)
    pb = list(f.minpoly.coefficients)
    q = list(perron.q_factor)
    g, s1, s2 = poly_xgcd(pb, q)
    if len(g) > 1:
        raise NotCoprime("minimal polynomial and cofactor share a factor")
    Mq = [[Fraction(x) for x in row] for row in M]
    piV = linalg.matmul(linalg.poly_of_matrix(s2, Mq), linalg.poly_of_matrix(q, Mq))
    if linalg.matmul(piV, piV) != piV:
        raise NotCoprime("projection is not idempotent")
    if linalg.matmul(piV, Mq) != linalg.matmul(Mq, piV):
        raise NotCoprime("projection does not commute with the matrix")
    cols = [[piV[i][j] for i in range(n)] for j in range(n)]
    D = linalg.common_denominator(x for c in cols for x in c)
    basis_int = linalg.hermite_columns([[int(x * D) for x in c] for c in cols])
    d = f.degree
    if len(basis_int) != d:
        raise NotCoprime(f"lattice rank {len(basis_int)} differs from degree {d}")
    G = [[Fraction(basis_int[k][i], D) for k in range(d)] for i in range(n)]  # n x d
    rows = _independent_rows(G)
    Gsub_inv = linalg.inverse([G[i] for i in rows])

    def coords(v):
        return linalg.matvec(Gsub_inv, [v[i] for i in rows])

    P = []
    for j in range(n):
        c = coords(cols[j])
        if any(x.denominator != 1 for x in c) or linalg.matvec(G, c) != cols[j]:
            raise NotCoprime("pi_V(e_j) is not in the lattice")
        P.append([int(x) for x in c])
    P = [list(r) for r in zip(*P)]  # d x n
    MG = linalg.matmul(Mq, G)
    Lcols = [coords([MG[i][k] for i in range(n)]) for k in range(d)]
    L = [[int(Lcols[k][i]) for k in range(d)] for i in range(d)]
    if any(x.denominator != 1 for c in Lcols for x in c):
        raise NotCoprime("Gamma is not invariant")
    if list(charpoly(L)) != pb:
        raise NotCoprime("restriction to V does not have the minimal polynomial")
    omega = perron.omega
    omega_gamma = _algmatvec(Gsub_inv, [omega[i] for i in rows], f.zero)
    for i in range(n):
        if sum((G[i][k] * omega_gamma[k] for k in range(d)), f.zero) != omega[i]:
            raise NotCoprime("omega is not in V")
    l_gamma = [
        sum((perron.l[i] * G[i][k] for i in range(n) if G[i][k]), f.zero) for k in range(d)
    ]
    return SplittingData(
        f,
        tuple(tuple(r) for r in M),
        tuple(tuple(r) for r in piV),
        tuple(tuple(r) for r in G),
        tuple(tuple(r) for r in P),
        tuple(tuple(r) for r in L),
        tuple(perron.l),
        tuple(omega),
        tuple(omega_gamma),
        tuple(l_gamma),
        tuple(q),
        tuple(s1),
        tuple(s2),
    )


def _independent_rows(G):
    chosen = []
    d = len(G[0])
    for i in range(len(G)):
        trial = [G[r] for r in chosen + [i]]
        _, piv = linalg._rref(trial, lambda x: x == 0)
        if len(piv) == len(trial):
            chosen.append(i)
        if len(chosen) == d:
            return chosen
    raise NotCoprime("lattice basis has deficient rank")


def project_components(S: SplittingData, v: Sequence) -> tuple[AlgNum, list[AlgNum]]:
    """(<l, v>, pi_V(v) - <l, v> omega) for a rational vector v."""
    f = S.field
    vu = sum((S.l_vec[j] * Fraction(x) for j, x in enumerate(v) if x), f.zero)
    pv = linalg.matvec([list(r) for r in S.pi_V], [Fraction(x) for x in v])
    vs = [f.rational(a) - vu * w for a, w in zip(pv, S.omega_vec)]
    return vu, vs


def fundamental_homoclinic(S: SplittingData) -> dict:
    """e = -pi_V(e_1 + ... + e_n) with the generation certificate."""
    d = S.d
    e_gamma = [-x for x in S.gamma_coords([1] * S.n)]
    cols = [e_gamma]
    for _ in range(d - 1):
        cols.append(_intmatvec(S.L, cols[-1]))
    mat = [[cols[k][i] for k in range(d)] for i in range(d)]
    det = linalg.det(mat)
    if det not in (1, -1):
        raise NotFundamental(f"determinant {det}")
    integral = all(x.is_integral() for x in S.l_gamma)
    if not integral:
        raise NotFundamental("unstable coordinates of Gamma leave Z[beta]")
    e = [-sum(r) for r in S.pi_V]
    return {
        "e": e,
        "e_gamma": e_gamma,
        "matrix": mat,
        "determinant": det,
        "gamma_u_in_z_beta": integral,
        "e_unstable": project_components(S, [-1] * S.n)[0],
    }


# -- torus and solenoid points --------------------------------------------------------------------

@dataclass(frozen=True)
class TorusPoint:
    """Gamma-coordinates in [0, 1) (exact centers) plus a certified radius."""

    coords: tuple[AlgNum, ...]
    radius: Fraction = Fraction(0)

    @classmethod
    def reduce(cls, values: Sequence[AlgNum], radius=Fraction(0)) -> "TorusPoint":
        return cls(tuple(v - floor_of(v) for v in values), Fraction(radius))

    @property
    def exact(self) -> bool:
        return self.radius == 0

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint.reduce([a - b for a, b in zip(self.coords, other.coords)], self.radius + other.radius)

    def shift(self, values: Sequence[AlgNum]) -> "TorusPoint":
        return TorusPoint.reduce([a + b for a, b in zip(self.coords, values)], self.radius)

    def apply(self, L) -> "TorusPoint":
        f = self.coords[0].field
        norm = max(sum(abs(x) for x in row) for row in L)
        return TorusPoint.reduce(_algmatvec(L, self.coords, f.zero), self.radius * norm)

    def distance_at_most(self, other: "TorusPoint", tol) -> bool:
        """Certified: every coordinate difference lies within radius + tol of an integer."""
        slack = self.radius + other.radius + Fraction(tol)
        for a, b in zip(self.coords, other.coords):
            diff = a - b
            k = floor_of(diff + Fraction(1, 2))
            if sign_of(abs_alg(diff - k) - slack) > 0:
                return False
        return True

    def floats(self) -> list[float]:
        return [float(c) for c in self.coords]

    def render(self) -> list[str]:
        return [c.render() for c in self.coords]


def abs_alg(x: AlgNum) -> AlgNum:
    return -x if sign_of(x) < 0 else x


@dataclass(frozen=True)
class SolenoidPoint:
    levels: tuple[TorusPoint, ...]

    def distance_at_most(self, other: "SolenoidPoint", tol) -> bool:
        return all(a.distance_at_most(b, tol) for a, b in zip(self.levels, other.levels))

    def automorphism(self, L) -> "SolenoidPoint":
        """The solenoid map: (z_1, z_2, ...) -> (L z_1, z_1, z_2, ...), keeping the number of levels."""
        return SolenoidPoint((self.levels[0].apply(L),) + self.levels[:-1])

    def level_compatible(self, L, tol=0) -> bool:
        return all(
            self.levels[j + 1].apply(L).distance_at_most(self.levels[j], tol)
            for j in range(len(self.levels) - 1)
        )


@dataclass(frozen=True)
class PrefixRecord:
    index: int
    counts: tuple[int, ...]  # the prefix word, abelianized
    prefix: tuple[int, ...]  # p_i in Gamma-coordinates
    vertex: tuple[AlgNum, ...] | None = None  # a_i in Gamma-coordinates (unreduced)


# -- prefixes from the tile at the origin -----------------------------------------------------

def _prefix_counts(rule: SubstitutionRule, prev: TileState, child: int, new: TileState) -> list[int]:
    """Abelianized word from beta * anchor(prev tiling) to anchor(new tiling).

    The type-1 anchor of T precedes the origin tile ``prev.letter`` by the
    tiles 1..letter-1; under the substitution these become psi(1)..psi(letter-1),
    followed by the part of psi(letter) before the child at the origin, less the
    tiles 1..new.letter-1 that precede the new anchor.
    """
    n = rule.alphabet_size
    counts = [0] * n
    for j in range(1, prev.letter):
        for c in rule.image(j):
            counts[c - 1] += 1
    for c in rule.image(prev.letter)[:child]:
        counts[c - 1] += 1
    for j in range(1, new.letter):
        counts[j - 1] -= 1
    return counts


def _seed_depth(T: SubstitutiveTiling) -> int:
    """J with |beta^-j t| < min tile length for all j >= J."""
    f = T.field
    lmin = _min_alg(T.rule.lengths())
    t = abs_alg(T.translation)
    j = 0
    while sign_of(t * f.beta_power(-j) - lmin) >= 0:
        j += 1
    return j


def _min_alg(values):
    best = values[0]
    for v in values[1:]:
        if sign_of(v - best) < 0:
            best = v
    return best


@dataclass
class _Orbit:
    """Tile states and prefixes of Psi^i(T) for i in [lo, hi]."""

    lo: int
    states: list
    counts: dict  # i -> prefix counts p_i (needs states i-1 and i)
    cycle: tuple[int, int] | None  # (i, j) with states[i] == states[j], i < j, i >= 0
    J: int


def _orbit(T: SubstitutiveTiling, N: int) -> _Orbit:
    rule = T.rule
    q = T.power
    J = _seed_depth(T)
    lo = -(J + q + 1)
    s = state_at_origin(substitute_tiling(T, lo))
    states = [s]
    counts = {}
    seen = {}
    cycle = None
    i = lo
    while i < N:
        nxt, child = step_state(rule, s)
        i += 1
        counts[i] = _prefix_counts(rule, s, child, nxt)
        states.append(nxt)
        s = nxt
        if i >= 0:
            if s in seen:
                cycle = (seen[s], i)
                break
            seen[s] = i
    return _Orbit(lo, states, counts, cycle, J)


def _count_at(orb: _Orbit, i: int) -> list[int]:
    if orb.cycle is not None:
        ci, cj = orb.cycle
        while i > cj:
            i -= cj - ci
    return orb.counts[i]


def _stable_sum(S: SplittingData, orb: _Orbit, q: int, shift: int = 0) -> list[AlgNum]:
    """Gamma-coordinates of sum_{k >= 0} L^k p^s_{shift-k} (exact; periodic tail summed in closed form)."""
    f = S.field
    acc = [f.zero] * S.d
    K0 = orb.J + 1 + shift  # p_{shift-k} is q-periodic in k once shift - k <= -J
    for k in range(K0):
        c = _count_at(orb, shift - k)
        term = S.stable_part(S.gamma_coords(c), S.length_of(c), k)
        acc = [a + b for a, b in zip(acc, term)]
    block = [f.zero] * S.d
    for r in range(q):
        c = _count_at(orb, shift - K0 - r)
        term = S.stable_part(S.gamma_coords(c), S.length_of(c), K0 + r)
        block = [a + b for a, b in zip(block, term)]
    tail = _algmatvec(S.geometric_inverse(q), block, f.zero)
    return [a + b for a, b in zip(acc, tail)]


def _unstable_sum(S: SplittingData, orb: _Orbit, N: int, shift: int = 0):
    """sum_{i >= 1} beta^-i <l, p_{shift+i}> as (value, certified error bound)."""
    f = S.field
    binv = f.beta_power(-1)
    lam = {i: S.length_of(c) for i, c in orb.counts.items()}
    if orb.cycle is not None and shift >= 0:
        ci, cj = orb.cycle
        period = cj - ci

        def at(i):  # lambda_i for any i > lo, unrolling the cycle
            while i > cj:
                i -= period
            return lam[i]

        start = max(shift, ci)
        head = f.zero
        w = f.one
        for i in range(shift + 1, start + 1):
            w = w * binv
            head = head + w * at(i)
        block = f.zero
        v = f.one
        for r in range(1, period + 1):
            v = v * binv
            block = block + v * at(start + r)
        value = head + w * block / (1 - f.beta_power(-period))
        return value, Fraction(0)
    top = max(lam)
    value = f.zero
    w = f.one
    for i in range(shift + 1, top + 1):
        w = w * binv
        value = value + w * lam[i]
    blo = f.beta_enclosure[0]
    terms = top - shift
    # each prefix has length < beta
    bound = blo ** (1 - terms) / (blo - 1)
    return value, bound


def _depth_for(S: SplittingData, tol: Fraction) -> int:
    blo = S.field.beta_enclosure[0]
    wmax = S.omega_sup()
    N = 1
    while wmax * blo ** (1 - N) / (blo - 1) > tol:
        N += 1
    return N


def shadow_factor_map(T: SubstitutiveTiling, S: SplittingData, depth: int | None = None,
                      tolerance=DEFAULT_TOLERANCE) -> TorusPoint:
    """pi(T) = a_0(gamma_T) mod Gamma from the prefix stream of T."""
    N = depth if depth is not None else _depth_for(S, Fraction(tolerance))
    orb = _orbit(T, N)
    a_s = _stable_sum(S, orb, T.power)
    su, err = _unstable_sum(S, orb, N)
    a = [x - su * w for x, w in zip(a_s, S.omega_gamma)]
    radius = err * S.omega_sup()
    if radius > Fraction(tolerance) and depth is None:
        raise PrecisionExceeded(f"tail bound {float(radius)} above tolerance")
    return TorusPoint.reduce(a, radius)


def prefix_records(T: SubstitutiveTiling, S: SplittingData, i_lo: int, i_hi: int,
                   tolerance=DEFAULT_TOLERANCE) -> list[PrefixRecord]:
    """Prefixes p_i and vertices a_i (Gamma-coordinates) for i_lo <= i <= i_hi.

    The vertices are computed independently for each i from the shadowing
    formula, so a_i = p_i + L a_(i-1) is a genuine check.  Requires i_lo >= 0
    and a tiling whose prefix stream cycles (e.g. an untranslated periodic
    tiling), so that every a_i is exact.
    """
    N = _depth_for(S, Fraction(tolerance)) + i_hi
    orb = _orbit(T, N)
    if orb.cycle is None:
        raise PrecisionExceeded("prefix stream did not cycle; vertices would not be exact")
    if i_lo < 0:
        raise ValueError("vertices are produced for i >= 0")
    out = []
    for i in range(i_lo, i_hi + 1):
        a_s = _stable_sum(S, orb, T.power, shift=i)
        su, err = _unstable_sum(S, orb, N, shift=i)
        a = tuple(x - su * w for x, w in zip(a_s, S.omega_gamma))
        c = _count_at(orb, i)
        out.append(PrefixRecord(i, tuple(c), tuple(S.gamma_coords(c)), a))
    return out


def solenoid_map(T: SubstitutiveTiling, S: SplittingData, levels: int = 4,
                 tolerance=DEFAULT_TOLERANCE) -> SolenoidPoint:
    """(pi(T), pi(Psi^-1 T), ..., pi(Psi^-(levels-1) T))."""
    return SolenoidPoint(
        tuple(shadow_factor_map(substitute_tiling(T, -j), S, tolerance=tolerance) for j in range(levels))
    )


# -- arithmetical coding -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoSidedDigits:
    """Digits x_i: ``left`` lists x_0, x_-1, ...; ``right`` lists x_1, x_2, ....

    Each side continues with its period (zeros when the period is empty).  If
    ``right_exact`` is False, digits beyond ``right`` are unknown but bounded by
    floor(beta).
    """

    left: tuple[int, ...] = ()
    left_period: tuple[int, ...] = ()
    right: tuple[int, ...] = ()
    right_period: tuple[int, ...] = ()
    right_exact: bool = True

    def digit(self, i: int) -> int:
        if i >= 1:
            return _stream_at(self.right, self.right_period, i - 1)
        return _stream_at(self.left, self.left_period, -i)

    def shift_right(self) -> "TwoSidedDigits":
        """sigma^-1: new x_i = old x_(i-1)."""
        x0 = self.digit(0)
        left, lp = _pop(self.left, self.left_period)
        return TwoSidedDigits(left, lp, (x0,) + self.right, self.right_period, self.right_exact)

    def shift_left(self) -> "TwoSidedDigits":
        """sigma: new x_i = old x_(i+1)."""
        if not self.right and not self.right_exact:
            raise PrecisionExceeded("no known digit to shift in")
        x1 = self.digit(1)
        right, rp = _pop(self.right, self.right_period)
        return TwoSidedDigits((x1,) + self.left, self.left_period, right, rp, self.right_exact)

    def window(self, lo: int, hi: int) -> list[int]:
        return [self.digit(i) for i in range(lo, hi + 1)]


def digits_from_expansion(e) -> TwoSidedDigits:
    """Two-sided digits of a greedy expansion: x_0 is the units digit."""
    return TwoSidedDigits(tuple(reversed(e.integer_digits)), (), tuple(e.preperiod), tuple(e.period), True)


def _stream_at(pre, period, k):
    if k < len(pre):
        return pre[k]
    if not period:
        return 0
    return period[(k - len(pre)) % len(period)]


def _pop(pre, period):
    if pre:
        return pre[1:], period
    if period:
        return (), period[1:] + period[:1]
    return (), ()


def _code_level(S: SplittingData, x: TwoSidedDigits, depth: int):
    """Gamma-coordinates of -sum_i x_i beta^-i omega (mod Gamma), with error bound."""
    f = S.field
    binv = f.beta_power(-1)
    # right side: scalar series
    if x.right_exact:
        head = f.zero
        w = f.one
        for dgt in x.right:
            w = w * binv
            head = head + w * dgt
        if x.right_period:
            block = f.zero
            v = f.one
            for dgt in x.right_period:
                v = v * binv
                block = block + v * dgt
            head = head + w * block / (1 - f.beta_power(-len(x.right_period)))
        R, err = head, Fraction(0)
    else:
        R = f.zero
        w = f.one
        digits = x.right[:depth]
        for dgt in digits:
            w = w * binv
            R = R + w * dgt
        blo = f.beta_enclosure[0]
        top = floor_of(f.beta)
        err = top * blo ** (-len(digits)) / (1 - 1 / blo)
    # left side: x beta^n omega == -x L^n u^s (mod Gamma), a convergent series
    left = [f.zero] * S.d
    ones = S.gamma_coords([1] * S.n)

    def add_term(acc, dgt, k):
        if not dgt:
            return acc
        term = S.stable_part(ones, f.one, k)  # L^k u^s, since <l, u> = 1
        return [p + dgt * t for p, t in zip(acc, term)]

    for k, dgt in enumerate(x.left):
        left = add_term(left, dgt, k)
    if x.left_period:
        q = len(x.left_period)
        block = [f.zero] * S.d
        for r, dgt in enumerate(x.left_period):
            block = add_term(block, dgt, len(x.left) + r)
        left = [a + b for a, b in zip(left, _algmatvec(S.geometric_inverse(q), block, f.zero))]
    values = [lv - R * wv for lv, wv in zip(left, S.omega_gamma)]
    return values, err * S.omega_sup()


def arithmetical_code(digits: TwoSidedDigits, S: SplittingData, levels: int = 4,
                      depth: int = 64, kneading: KneadingData | None = None) -> SolenoidPoint:
    """h(x) with fundamental homoclinic point -omega: level j is -beta^-(j-1) sum x_i beta^-i omega."""
    if kneading is not None:
        span = digits.window(-len(digits.left) - 2 * len(digits.left_period),
                             len(digits.right) + 2 * len(digits.right_period))
        if not is_admissible(kneading, span):
            raise Inadmissible("digit sequence is not admissible")
    out = []
    x = digits
    for _ in range(levels):
        values, radius = _code_level(S, x, depth)
        out.append(TorusPoint.reduce(values, radius))
        x = x.shift_right()
    return SolenoidPoint(tuple(out))


def tiling_digits(T: SubstitutiveTiling, S: SplittingData, depth: int | None = None,
                  tolerance=DEFAULT_TOLERANCE) -> TwoSidedDigits:
    """The itinerary x_i(T) as two-sided digits, with exact periodic tails where they exist."""
    rule = T.rule
    f = T.field
    N = depth if depth is not None else _depth_for(S, Fraction(tolerance)) + 2
    q = T.power
    J = _seed_depth(T)
    lo = -(J + 2 * q + 1)
    s = state_at_origin(substitute_tiling(T, lo))
    digits = {}
    anchors = {}
    i = lo
    cycle = None
    while True:
        g = anchor(rule, s)
        y = g * f.beta
        x = floor_of(y)
        digits[i] = x
        if i >= 0:
            if g in anchors:
                cycle = (anchors[g], i)
                break
            anchors[g] = i
        if i >= N:
            break
        s, _ = step_state(rule, s)
        i += 1
    # left side: x_i is q-periodic for i <= -J - 1
    start = -J - 1
    period = tuple(digits[start - r] for r in range(q))
    check = tuple(digits[start - q - r] for r in range(q))
    if period != check:
        raise AssertionError("left digits are not periodic past the seed depth")
    left = tuple(digits[-k] for k in range(0, -start))
    if cycle is not None:
        ci, cj = cycle
        pre = tuple(digits[k] for k in range(1, ci + 1))
        per = tuple(digits[k] for k in range(ci + 1, cj + 1)) if ci >= 0 else ()
        return TwoSidedDigits(left, period, pre, per, True)
    right = tuple(digits[k] for k in range(1, i + 1))
    return TwoSidedDigits(left, period, right, (), False)


# -- experiments -----------------------------------------------------------------------------------------------

def coding_consistency_and_injectivity(rule: SubstitutionRule, S: SplittingData, samples: int = 50,
                                       eps=Fraction(1, 10**8), levels: int = 4, seed: int = 0,
                                       collisions: int = 0, collision_eps: float = 1e-6) -> dict:
    """(a) pi-hat(T) against h(shifted itinerary of T) on periodic tilings and translates;
    (b) near-collision count of h over random admissible digit windows."""
    from .tiling import canonical_periodic_tilings, translate_tiling

    rng = random.Random(seed)
    f = S.field
    family = canonical_periodic_tilings(rule)
    agree = 0
    failures = []
    for k in range(samples):
        T = family[k % len(family)]
        if k >= len(family):
            t = Fraction(rng.randrange(-4000, 4000), rng.choice([64, 97, 1000]))
            T = translate_tiling(T, f.rational(t))
        lhs = solenoid_map(T, S, levels)
        x = tiling_digits(T, S).shift_right()
        rhs = arithmetical_code(x, S, levels)
        if lhs.distance_at_most(rhs, eps):
            agree += 1
        else:
            failures.append(repr(T))
    report = {"samples": samples, "levels": levels, "tolerance": str(eps),
              "agree": agree, "failures": failures}
    if collisions:
        report["collision"] = collision_experiment(rule, S, collisions, collision_eps, levels, rng)
    return report


def random_admissible_word(k: KneadingData, top: int, length: int, rng: random.Random) -> list[int]:
    word: list[int] = []
    while len(word) < length:
        options = [dgt for dgt in range(top + 1) if is_admissible(k, word + [dgt])]
        word.append(rng.choice(options))
    return word


def collision_experiment(rule: SubstitutionRule, S: SplittingData, n: int, eps: float,
                         levels: int, rng: random.Random, left_len: int | None = None,
                         right_len: int | None = None) -> dict:
    """Count pairs of distinct finite admissible windows whose codes agree within eps at every level.

    By default the right part is as long as the resolution allows (its last
    digit still moves level 1 by about 10 eps) and the left part is just long
    enough to supply 20 n words.
    """
    import math

    beta = S.field.beta_float
    wmax = max(abs(float(w)) for w in S.omega_gamma)
    if right_len is None:
        right_len = max(1, int(math.log(wmax / (10 * eps)) / math.log(beta)))
    if left_len is None:
        left_len = max(2, math.ceil(math.log(20 * n) / math.log(beta)) - right_len)
    f = S.field
    k = rule.kneading
    top = floor_of(f.beta)
    words = set()
    tries = 0
    while len(words) < n and tries < 20 * n:
        words.add(tuple(random_admissible_word(k, top, left_len + right_len, rng)))
        tries += 1
    words = sorted(words)
    exps = np.arange(-(left_len - 1), right_len + 1, dtype=float)  # digit i has weight beta^-i
    W = np.array(words, dtype=float)
    X = W @ (beta ** -exps)
    omega = np.array([float(w) for w in S.omega_gamma])
    feats = []
    for j in range(levels):
        lv = -np.outer(X * beta ** (-j), omega)
        feats.append(lv - np.floor(lv))
    F = np.concatenate(feats, axis=1)
    keys = np.floor(F[:, : S.d] / eps).astype(np.int64)
    buckets: dict = {}
    for idx, key in enumerate(map(tuple, keys)):
        buckets.setdefault(key, []).append(idx)
    candidates = 0
    confirmed = 0
    offsets = np.array(np.meshgrid(*[[-1, 0, 1]] * S.d)).reshape(S.d, -1).T
    for idx, key in enumerate(keys):
        for off in offsets:
            for jdx in buckets.get(tuple(key + off), ()):
                if jdx <= idx:
                    continue
                diff = np.abs(F[idx] - F[jdx])
                diff = np.minimum(diff, 1 - diff)
                if np.all(diff <= eps):
                    candidates += 1
                    a = TwoSidedDigits(tuple(reversed(words[idx][:left_len])), (), tuple(words[idx][left_len:]))
                    b = TwoSidedDigits(tuple(reversed(words[jdx][:left_len])), (), tuple(words[jdx][left_len:]))
                    if arithmetical_code(a, S, levels).distance_at_most(arithmetical_code(b, S, levels), Fraction(eps)):
                        confirmed += 1
    return {"windows": len(words), "left_length": left_len, "right_length": right_len, "epsilon": eps,
            "float_candidates": candidates, "collisions": confirmed}


def _stable_basis(S: SplittingData) -> np.ndarray:
    G = np.array([[float(x) for x in row] for row in S.gamma_basis])
    lg = np.array([float(x) for x in S.l_gamma])
    _, _, vt = np.linalg.svd(lg.reshape(1, -1))
    null = vt[1:].T  # d x (d-1) in Gamma-coordinates
    B = G @ null
    qmat, _ = np.linalg.qr(B)
    return qmat  # n x (d-1), orthonormal basis of E^s


def rauzy_cloud(T: SubstitutiveTiling, S: SplittingData, count: int) -> dict:
    """Stable projections of the first ``count`` strand vertices to the right of the anchor."""
    if S.d < 2:
        raise ValueError("need degree >= 2")
    rule = T.rule
    f = S.field
    basis = _stable_basis(S)
    if count <= 0:
        return {"points": np.zeros((0, S.d - 1)), "bound": rauzy_bound(rule, S, basis)}
    g = anchor(rule, state_at_origin(T))
    start = -g
    span = f.rational(max(2, count))
    while True:
        patch = [t for t in window(T, start, start + span) if sign_of(t.start - start) >= 0]
        if len(patch) >= count:
            break
        span = span * 2
    piV = np.array([[float(x) for x in row] for row in S.pi_V])
    omega = np.array([float(w) for w in S.omega_vec])
    lvec = np.array([float(x) for x in S.l_vec])
    counts = np.zeros(S.n)
    pts = []
    for tile in patch[:count]:
        counts[tile.type_index - 1] += 1
        v = piV @ counts
        vs = v - (lvec @ counts) * omega
        pts.append(basis.T @ vs)
    return {"points": np.array(pts), "bound": rauzy_bound(rule, S, basis)}


def rauzy_bound(rule: SubstitutionRule, S: SplittingData, basis: np.ndarray | None = None) -> float:
    """Bound on |v^s| for strand vertices measured from a vertex (prefix/suffix decomposition)."""
    basis = _stable_basis(S) if basis is None else basis
    M = np.array(S.M, dtype=float)
    R = basis.T @ M @ basis
    piV = np.array([[float(x) for x in row] for row in S.pi_V])
    omega = np.array([float(w) for w in S.omega_vec])
    lvec = np.array([float(x) for x in S.l_vec])

    def snorm(c):
        c = np.asarray(c, dtype=float)
        return np.linalg.norm(basis.T @ (piV @ c - (lvec @ c) * omega))

    C = 0.0
    for w in rule.words:
        for cut in range(len(w) + 1):
            pre = np.bincount(np.array(w[:cut], dtype=int) - 1, minlength=S.n) if cut else np.zeros(S.n)
            suf = np.bincount(np.array(w[cut:], dtype=int) - 1, minlength=S.n) if cut < len(w) else np.zeros(S.n)
            C = max(C, snorm(pre), snorm(suf))
    total = 0.0
    P = np.eye(R.shape[0])
    for _ in range(2000):
        nrm = np.linalg.norm(P, 2)
        total += nrm
        if nrm < 1e-14:
            break
        P = R @ P
    return 2 * C * total + max(snorm(np.eye(S.n)[j]) for j in range(S.n))
