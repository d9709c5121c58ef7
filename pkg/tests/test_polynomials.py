from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from betatiling.errors import PolynomialError
from betatiling.polynomials import (
    IntPolynomial,
    charpoly,
    isolate_real_roots,
    parse_polynomial,
    poly_divmod,
    poly_mul,
    poly_trim,
    poly_xgcd,
    schur_cohn_inside,
    sturm_chain,
    sturm_count,
)

small = st.integers(min_value=-6, max_value=6)
polys = st.lists(small, min_size=2, max_size=6).filter(lambda c: c[-1] != 0)


@pytest.mark.parametrize(
    "text, coeffs",
    [("x^2-3x+1", (1, -3, 1)), ("x^3 - x - 1", (-1, -1, 0, 1)), ("-x+2", (2, -1)), ("x^4-2*x^3-3x^2+2x+1", (1, 2, -3, -2, 1))],
)
def test_parse_and_render(text, coeffs):
    p = parse_polynomial(text)
    assert p.coefficients == coeffs
    assert parse_polynomial(str(p)) == p


def test_constant_is_rejected():
    with pytest.raises(PolynomialError):
        IntPolynomial((3,))


@given(polys, polys)
def test_divmod_reconstructs(a, b):
    q, r = poly_divmod(a, b)
    back = [x + y for x, y in zip(poly_mul(q, b) + [0] * len(a), r + [0] * (len(a) + len(b)))]
    assert poly_trim(back) == poly_trim([Fraction(x) for x in a])
    assert len(poly_trim(r)) < len(b) or not any(r)


@given(polys, polys)
def test_xgcd_bezout(a, b):
    g, s, t = poly_xgcd(a, b)
    combo = [x + y for x, y in zip(poly_mul(s, a) + [0] * 20, poly_mul(t, b) + [0] * 20)]
    assert poly_trim(combo) == poly_trim(g)
    for p in (a, b):
        _, r = poly_divmod(p, g)
        assert not any(r)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_sturm_counts_match_float_roots(c):
    import sympy

    x = sympy.Symbol("x")
    sq = sympy.Poly(list(reversed(c)), x).sqf_part()
    coeffs = [int(v) for v in reversed(sq.all_coeffs())]
    if len(coeffs) < 2:
        return
    real = sorted(float(r) for r in sympy.Poly(list(reversed(coeffs)), x).real_roots())
    assert sturm_count(sturm_chain(coeffs), -100, 100) == len(real)
    found = isolate_real_roots(coeffs)
    assert len(found) == len(real)
    for (lo, hi), r in zip(found, real):
        assert lo <= Fraction(r) + Fraction(1, 10**9) and Fraction(r) - Fraction(1, 10**9) <= hi


@settings(max_examples=60, deadline=None)
@given(polys)
def test_schur_cohn_against_root_moduli(c):
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(c)), x)
    assume(poly.degree() == poly.sqf_part().degree())
    count = schur_cohn_inside(c)
    mods = [abs(r) for r in oracles.roots(c)]
    if any(abs(m - 1) < 1e-9 for m in mods):
        return
    if count is not None:
        assert count == sum(m < 1 for m in mods)


def test_schur_cohn_examples():
    # reciprocal polynomials have roots symmetric about the circle: singular
    assert schur_cohn_inside([1, -3, 1]) is None
    assert schur_cohn_inside([-3, -3, 1]) == 1
    # equal-modulus end coefficients make the first step singular; a radius scaling fixes it
    assert schur_cohn_inside([-1, -1, -1, 1]) is None
    rho = Fraction(9, 10)
    assert schur_cohn_inside([c * rho**i for i, c in enumerate([-1, -1, -1, 1])]) == 2
    assert schur_cohn_inside([3, 1, 1]) == 0


@pytest.mark.parametrize("m", [[[2, 1], [1, 1]], [[1, 1, 1], [1, 0, 0], [0, 1, 0]], [[0, 1, 0, 2], [1, 1, 0, 0], [3, 0, 1, 1], [0, 0, 1, 2]]])
def test_charpoly_matches_sympy(m):
    assert charpoly(m) == oracles.char_poly(m)
