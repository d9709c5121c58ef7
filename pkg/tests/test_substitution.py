import pytest

import oracles
from conftest import FIELDS, PLASTIC, TRIBONACCI, pipe
from betatiling.algebra import sign_of
from betatiling.errors import IntegerBeta
from betatiling.numeration import kneading_of
from betatiling.algebra import verify_pisot
from betatiling.substitution import (
    build_substitution,
    example_discrepancy_report,
    parse_rule,
    verify_language_properties,
)


def test_golden_rule(golden):
    r = golden.rule
    b = golden.field.beta
    assert r.render() == "1->121; 2->21"
    assert [(t.min, t.max) for t in r.prototiles] == [(golden.field.zero, b - 2), (b - 2, golden.field.one)]
    assert golden.matrix.tolist() == [[2, 1], [1, 1]]
    assert golden.perron.q_factor == (1,)
    assert golden.primitive


def test_tribonacci_rule():
    t = pipe(TRIBONACCI)
    assert t.rule.render() == "1->123; 2->1; 3->2"
    assert t.matrix.tolist() == [[1, 1, 1], [1, 0, 0], [0, 1, 0]]
    assert str(t.perron.char_poly) == "x^3-x^2-x-1"


def test_plastic_rule():
    p = pipe(PLASTIC)
    assert p.rule.alphabet_size == 5
    assert (p.kneading.m, p.kneading.p) == (0, 5)
    assert len(p.perron.q_factor) - 1 == 2


@pytest.mark.parametrize("poly", FIELDS)
def test_rule_matches_interval_crossing_oracle(poly):
    P = pipe(poly)
    mins, maxs, words = oracles.interval_crossing_substitution(list(P.field.minpoly.coefficients))
    assert [tuple(w) for w in P.rule.words] == words
    for t, lo, hi in zip(P.rule.prototiles, mins, maxs):
        assert abs(float(t.min) - lo) < 1e-12 and abs(float(t.max) - hi) < 1e-12


@pytest.mark.parametrize("poly", FIELDS)
def test_char_poly_matches_sympy_and_factors(poly):
    P = pipe(poly)
    cp = oracles.char_poly(P.matrix.tolist())
    assert list(P.perron.char_poly.coefficients) == cp
    assert P.field.degree in oracles.factor_degrees(cp)


@pytest.mark.parametrize("poly", FIELDS)
def test_exact_eigen_identities(poly):
    P = pipe(poly)
    f = P.field
    l, w = P.perron.l, P.perron.omega
    n = P.rule.alphabet_size
    M = P.matrix.abelianization
    assert sum(l, f.zero) == f.one
    for i in range(n):
        assert f.beta * l[i] == sum((l[c - 1] for c in P.rule.image(i + 1)), f.zero)
        assert sum((M[i][j] * w[j] for j in range(n)), f.zero) == f.beta * w[i]
        assert sign_of(l[i]) > 0 and sign_of(w[i]) > 0
    for j in range(n):
        assert sum((l[i] * M[i][j] for i in range(n)), f.zero) == f.beta * l[j]
    assert sum((a * b for a, b in zip(l, w)), f.zero) == f.one


@pytest.mark.parametrize("poly", FIELDS)
def test_language_properties_hold(poly):
    P = pipe(poly)
    rep = verify_language_properties(P.rule, 6)
    assert all(rep[k]["holds"] for k in ("property_1", "property_2", "property_3"))
    assert {tuple(map(int, x)) for x in rep["factors"]} == oracles.two_letter_factors(P.rule.words, 6)


def test_thue_morse_fails():
    rep = verify_language_properties(parse_rule("1->12; 2->21"), 6)
    assert not rep["property_1"]["holds"]
    assert "22" in rep["property_1"]["offending"]
    assert not rep["property_3"]["holds"]


def test_integer_beta_has_no_rule():
    f = verify_pisot("x-2")
    with pytest.raises(IntegerBeta):
        build_substitution(kneading_of(f), f)


def test_discrepancy_report():
    rep = example_discrepancy_report()
    assert rep["consistent"] is False
    assert rep["word_char_poly"] == "x^4-2x^3-2x^2+x"
    assert rep["forced_polynomial"] == "x^4-2x^3-3x^2+2x+1"
    assert rep["forced_polynomial_verdict"].startswith("NotPisot")
    assert sorted(rep["word_char_poly_factors"]) == sorted(["x", "x + 1", "x**2 - 3*x + 1"])
