import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import GOLDEN, NONSIMPLE_P2, PLASTIC, TRIBONACCI, pipe
from betatiling import linalg
from betatiling.errors import Inadmissible
from betatiling.geometry import (
    SolenoidPoint,
    TorusPoint,
    TwoSidedDigits,
    arithmetical_code,
    coding_consistency_and_injectivity,
    digits_from_expansion,
    fundamental_homoclinic,
    prefix_records,
    project_components,
    random_admissible_word,
    rauzy_cloud,
    shadow_factor_map,
    solenoid_map,
    tiling_digits,
)
from betatiling.numeration import greedy_expansion
from betatiling.polynomials import charpoly
from betatiling.tiling import canonical_periodic_tilings, digit_itinerary, substitute_tiling, translate_tiling

TOL = Fraction(1, 10**9)
GEOM_FIELDS = [GOLDEN, TRIBONACCI, PLASTIC, NONSIMPLE_P2]


def test_golden_splitting_is_trivial(golden):
    S = golden.splitting
    assert [list(r) for r in S.pi_V] == [[1, 0], [0, 1]]
    assert abs(linalg.det([list(r) for r in S.gamma_basis])) == 1
    assert S.q_factor == (1,)


def test_plastic_splitting_is_nontrivial():
    P = pipe(PLASTIC)
    S = P.splitting
    piV = [list(r) for r in S.pi_V]
    assert len(S.q_factor) - 1 == 2
    assert piV != linalg.identity(5)
    assert linalg.matmul(piV, piV) == piV
    M = [list(r) for r in S.M]
    assert linalg.matmul(piV, M) == linalg.matmul(M, piV)
    assert S.d == 3


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_lattice_invariants(poly):
    P = pipe(poly)
    S = P.splitting
    f = P.field
    assert list(charpoly(S.L)) == list(f.minpoly.coefficients)
    assert all(x.is_integral() for x in S.l_gamma)
    assert sum((a * b for a, b in zip(S.l_vec, S.omega_vec)), f.zero) == f.one
    # Gamma-basis columns are pi_V images of integer vectors
    G = [list(r) for r in S.gamma_basis]
    for j in range(S.n):
        col = [S.pi_V[i][j] for i in range(S.n)]
        assert linalg.matvec(G, S.gamma_coords([int(k == j) for k in range(S.n)])) == col


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_projection_components(poly):
    P = pipe(poly)
    S = P.splitting
    f = P.field
    for i in range(S.n):
        vu, vs = project_components(S, [S.pi_V[r][i] for r in range(S.n)])
        assert vu == S.l_vec[i]
    rng = random.Random(3)
    for _ in range(10):
        v = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(S.n)]
        vu, vs = project_components(S, v)
        pv = linalg.matvec([list(r) for r in S.pi_V], v)
        assert [a + vu * w for a, w in zip(vs, S.omega_vec)] == [f.rational(x) for x in pv]
        assert sum((l * x for l, x in zip(S.l_vec, vs)), f.zero) == f.zero


def test_fundamental_homoclinic_golden(golden):
    fh = fundamental_homoclinic(golden.splitting)
    assert fh["e"] == [-1, -1]
    assert fh["matrix"] == [[-1, -3], [-1, -2]]
    assert fh["determinant"] == -1
    assert fh["e_unstable"] == -golden.field.one


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_fundamental_homoclinic_generates(poly):
    fh = fundamental_homoclinic(pipe(poly).splitting)
    assert fh["determinant"] in (1, -1)
    assert fh["gamma_u_in_z_beta"]


def test_zero_seed_maps_to_zero(golden):
    T = {t.label: t for t in canonical_periodic_tilings(golden.rule)}["T_1^0"]
    p = shadow_factor_map(T, golden.splitting)
    assert p.exact and all(c.is_zero() for c in p.coords)


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_factor_map_equivariance(poly):
    P = pipe(poly)
    S, f = P.splitting, P.field
    fam = canonical_periodic_tilings(P.rule)
    rng = random.Random(11)
    for _ in range(8):
        T = fam[rng.randrange(len(fam))]
        base = shadow_factor_map(T, S)
        t = f.rational(Fraction(rng.randrange(-500, 500), rng.choice([7, 64, 101])))
        moved = shadow_factor_map(translate_tiling(T, t), S)
        assert 2 * moved.radius <= TOL
        assert moved.distance_at_most(base.shift([-t * w for w in S.omega_gamma]), TOL)
        s = f.rational(Fraction(rng.randrange(1, 300), 13))
        Tt = translate_tiling(T, s)
        assert shadow_factor_map(substitute_tiling(Tt), S).distance_at_most(shadow_factor_map(Tt, S).apply(S.L), TOL)


def test_distinct_translates_are_separated(golden):
    S, f = golden.splitting, golden.field
    T = canonical_periodic_tilings(golden.rule)[0]
    a = shadow_factor_map(T, S)
    b = shadow_factor_map(translate_tiling(T, f.rational(Fraction(1, 3))), S)
    assert not a.distance_at_most(b, Fraction(1, 10**6))


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_prefix_chain(poly):
    P = pipe(poly)
    S, f = P.splitting, P.field
    for T in canonical_periodic_tilings(P.rule):
        recs = prefix_records(T, S, 0, 8)
        for prev, rec in zip(recs, recs[1:]):
            La = [sum((S.L[r][c] * prev.vertex[c] for c in range(S.d)), f.zero) for r in range(S.d)]
            assert list(rec.vertex) == [p + x for p, x in zip(rec.prefix, La)]
        digits = digit_itinerary(T, -1, 8)
        for rec in recs:
            assert S.length_of(rec.counts) == digits[rec.index]  # <l, p_i> = x_(i-1)


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_solenoid_levels_compatible(poly):
    P = pipe(poly)
    S, f = P.splitting, P.field
    T = translate_tiling(canonical_periodic_tilings(P.rule)[0], f.rational(Fraction(2, 9)))
    assert solenoid_map(T, S, 4).level_compatible(S.L, Fraction(1, 10**8))


def test_zero_digits_code_to_zero(golden):
    h = arithmetical_code(TwoSidedDigits(), golden.splitting, 4)
    assert all(c.is_zero() for lv in h.levels for c in lv.coords)


def test_inadmissible_digits_rejected(golden):
    with pytest.raises(Inadmissible):
        arithmetical_code(TwoSidedDigits((), (), (2, 2)), golden.splitting, 2, kneading=golden.kneading)


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_code_shift_equivariance(poly):
    P = pipe(poly)
    S = P.splitting
    rng = random.Random(5)
    top = int(P.field.beta_float)
    for _ in range(12):
        w = random_admissible_word(P.kneading, top, 14, rng)
        x = TwoSidedDigits(tuple(reversed(w[:5])), (), tuple(w[5:]))
        h = arithmetical_code(x, S, 4)
        assert arithmetical_code(x.shift_left(), S, 4).distance_at_most(h.automorphism(S.L), Fraction(1, 10**8))


@pytest.mark.parametrize("poly", GEOM_FIELDS)
def test_code_additivity(poly):
    P = pipe(poly)
    S, f = P.splitting, P.field
    rng = random.Random(9)
    for _ in range(8):
        a = f([rng.randrange(0, 6) for _ in range(f.degree)], rng.choice([1, 1, 2]))
        b = f([rng.randrange(0, 6) for _ in range(f.degree)])
        a, b = a * a + 1, b * b + 1  # keep them positive
        if a.den != 1:
            a = a * 4
        codes = [arithmetical_code(digits_from_expansion(greedy_expansion(f, v)), S, 4) for v in (a, b, a + b)]
        total = SolenoidPoint(tuple(x.shift(list(y.coords)) for x, y in zip(codes[0].levels, codes[1].levels)))
        assert codes[2].distance_at_most(total, Fraction(1, 10**8))


@pytest.mark.parametrize("poly", [GOLDEN, NONSIMPLE_P2])
def test_coding_identity_small(poly):
    P = pipe(poly)
    rep = coding_consistency_and_injectivity(P.rule, P.splitting, samples=12, eps=Fraction(1, 10**8))
    assert rep["agree"] == 12, rep["failures"]


def test_coding_report_is_deterministic(golden):
    a = coding_consistency_and_injectivity(golden.rule, golden.splitting, samples=4, collisions=300, seed=2)
    b = coding_consistency_and_injectivity(golden.rule, golden.splitting, samples=4, collisions=300, seed=2)
    assert a == b


def test_tiling_digits_match_itinerary(golden):
    T = translate_tiling(canonical_periodic_tilings(golden.rule)[0], golden.field.rational(Fraction(3, 5)))
    x = tiling_digits(T, golden.splitting)
    assert x.window(-5, 10) == digit_itinerary(T, -5, 10)


def test_torus_point_reduction(golden):
    f = golden.field
    p = TorusPoint.reduce([f.beta, -f.beta])
    assert all(0 <= float(c) < 1 for c in p.coords)
    assert p.distance_at_most(TorusPoint.reduce([f.beta + 3, -f.beta - 1]), 0)


def test_rauzy_cloud_empty(golden):
    out = rauzy_cloud(canonical_periodic_tilings(golden.rule)[0], golden.splitting, 0)
    assert out["points"].shape == (0, 1)


@pytest.mark.parametrize("poly, dim", [(GOLDEN, 1), (TRIBONACCI, 2)])
def test_rauzy_cloud_bounded(poly, dim):
    P = pipe(poly)
    out = rauzy_cloud(canonical_periodic_tilings(P.rule)[0], P.splitting, 500)
    pts = out["points"]
    assert pts.shape == (500, dim)
    assert np.all(np.linalg.norm(pts, axis=1) <= out["bound"])
    assert len(np.unique(np.round(pts, 9), axis=0)) == 500


def test_collision_experiment_golden(golden):
    rep = coding_consistency_and_injectivity(golden.rule, golden.splitting, samples=1,
                                             collisions=10_000, collision_eps=1e-6)
    assert rep["collision"]["windows"] == 10_000
    assert rep["collision"]["collisions"] == 0
