import random
from fractions import Fraction

import pytest

import oracles
from conftest import FIELDS, GOLDEN, pipe
from betatiling.errors import InvalidInterval, NotInZInvBeta, OutOfRange
from betatiling.numeration import (
    Finite,
    Infinite,
    NotFound,
    Witness,
    fin_membership,
    greedy_expansion,
    is_admissible,
    parse_digits,
    property_w_witness,
    t_beta_step,
)


@pytest.fixture(scope="module")
def g():
    return pipe(GOLDEN)


def test_t_beta_step_examples(g):
    f = g.field
    b = f.beta
    assert t_beta_step(f, b - 2) == (1, b - 2)
    assert t_beta_step(f, f.zero) == (0, f.zero)
    half = f.rational(Fraction(1, 2))
    assert t_beta_step(f, half) == (1, b / 2 - 1)
    with pytest.raises(OutOfRange):
        t_beta_step(f, f.one)


@pytest.mark.parametrize(
    "poly, m, p, text",
    [(GOLDEN, 1, 1, "2(1)"), ("x^3-x^2-x-1", 0, 3, "(110)"), ("x^3-x-1", 0, 5, "(10000)"),
     ("x^2-x-1", 0, 2, "(10)"), ("x^3-2x^2-x+1", 1, 2, "2(01)"), ("x^3-3x^2+2x-1", 2, 1, "20(1)")],
)
def test_kneading_examples(poly, m, p, text):
    k = pipe(poly).kneading
    assert (k.m, k.p, k.render()) == (m, p, text)
    assert k.value() == k.field.one


@pytest.mark.parametrize("poly", FIELDS)
def test_kneading_matches_quasi_greedy_oracle(poly):
    k = pipe(poly).kneading
    assert list(k.stream(60)) == oracles.quasi_greedy_digits(list(k.field.minpoly.coefficients), 60)


@pytest.mark.parametrize("poly", FIELDS)
def test_kneading_orbit_is_t_beta_orbit(poly):
    k = pipe(poly).kneading
    f = k.field
    for i in range(1, len(k.orbit)):
        y = k.orbit[i - 1] * f.beta
        assert k.orbit[i] == y - int(y.__floor__()) or k.orbit[i] == f.one


def test_greedy_expansion_examples(g):
    f = g.field
    b = f.beta
    assert greedy_expansion(f, 1 / b).render() == "1"
    assert greedy_expansion(f, b - 2).render() == "(1)"
    assert greedy_expansion(f, f.zero).render() == ""
    assert greedy_expansion(f, 2 + b).render() == "12."
    assert greedy_expansion(f, f.rational(7)).render() == "100.01"


@pytest.mark.parametrize("poly", FIELDS)
def test_greedy_expansions_match_float_oracle(poly):
    f = pipe(poly).field
    rng = random.Random(poly)
    for _ in range(15):
        x = f([rng.randrange(-9, 10) for _ in range(f.degree)], rng.randrange(1, 6))
        x = x - x.__floor__()
        e = greedy_expansion(f, x)
        assert e.value() == x
        coeffs = list(f.minpoly.coefficients)
        ref = oracles.greedy_digits(coeffs, x.coords, 30)
        assert list(e.fractional_stream(30)) == ref
        assert is_admissible(pipe(poly).kneading, e.fractional_stream(40))


def test_admissibility_examples(g):
    k = g.kneading
    assert is_admissible(k, [1, 1])
    assert not is_admissible(k, [2, 2])
    assert is_admissible(k, [2, 1, 1])
    assert is_admissible(k, k.stream(20))


def test_fin_membership(g):
    f = g.field
    b = f.beta
    assert isinstance(fin_membership(f, 1 / b), Finite)
    assert isinstance(fin_membership(f, b - 2), Infinite)
    assert isinstance(fin_membership(f, 2 + b), Finite)


def test_property_w_exact_witness(g):
    f = g.field
    b = f.beta
    r = property_w_witness(f, 1 / b, Fraction(3, 10), Fraction(1, 2))
    assert isinstance(r, Witness) and r.t == 1 / b
    assert greedy_expansion(f, 2 / b).render() == "2"


def test_property_w_for_periodic_point(g):
    f = g.field
    z = f.beta - 2
    r = property_w_witness(f, z, 0, Fraction(1, 2), 100_000)
    assert isinstance(r, Witness)
    assert 0 < float(r.t) < 0.5
    assert isinstance(fin_membership(f, r.t), Finite)
    assert isinstance(fin_membership(f, z + r.t), Finite)


def test_property_w_errors(g):
    f = g.field
    with pytest.raises(InvalidInterval):
        property_w_witness(f, f.one, 1, 0)
    with pytest.raises(NotInZInvBeta):
        property_w_witness(f, f.rational(Fraction(1, 2)), 0, 1)


def test_property_w_budget_exhaustion(g):
    f = g.field
    r = property_w_witness(f, f.beta - 2, 0, Fraction(1, 2), budget=0)
    assert isinstance(r, NotFound)


def test_parse_digits():
    assert parse_digits("2(01)") == ((2,), (0, 1))
    assert parse_digits("10,11") == ((10, 11), ())
