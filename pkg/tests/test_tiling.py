import random
from fractions import Fraction

import pytest

import oracles
from conftest import FIBONACCI, FIELDS, GOLDEN, NONSIMPLE_P2, PLASTIC, TRIBONACCI, pipe
from betatiling.algebra import sign_of
from betatiling.numeration import is_admissible
from betatiling.tiling import (
    Asymptotic,
    Coincides,
    Diverges,
    Unknown,
    asymptotic_test,
    canonical_periodic_tilings,
    dense_stable_scan,
    digit_itinerary,
    locate,
    patches_allowed,
    spectrum_certificate,
    stable_equiv_test,
    substitute_tiling,
    translate_tiling,
    window,
)


def family(poly):
    return {T.label: T for T in canonical_periodic_tilings(pipe(poly).rule)}


def test_golden_family():
    fam = family(GOLDEN)
    assert sorted(fam) == ["T_1", "T_1^0"]
    assert fam["T_1"].seed() == "1|2"
    assert fam["T_1^0"].seed() == "1|1"
    T = fam["T_1"]
    assert substitute_tiling(T).same_tiling(T)
    assert substitute_tiling(fam["T_1^0"]).same_tiling(fam["T_1^0"])


def test_nonsimple_family_labels():
    fam = family(NONSIMPLE_P2)
    assert sorted(fam) == ["T_1", "T_1^0", "T_2", "T_2^0"]
    assert all(T.power == 2 for T in fam.values())


def test_simple_family_is_fixed_seeds():
    fam = family(TRIBONACCI)
    assert all(T.right == 1 for T in fam.values())
    assert fam  # at least one fixed tiling


def test_golden_window(golden):
    f = golden.field
    b = f.beta
    T = family(GOLDEN)["T_1^0"]
    p = window(T, 0, 1)
    assert [(t.type_index, t.start, t.end) for t in p] == [(1, f.zero, b - 2), (2, b - 2, f.one)]


@pytest.mark.parametrize("poly", FIELDS)
def test_right_half_matches_fixed_word_oracle(poly):
    P = pipe(poly)
    for T in canonical_periodic_tilings(P.rule):
        if T.power != 1 and P.rule.first_letter(T.right, 1) != T.right:
            continue
        patch = [t for t in window(T, 0, 30) if sign_of(t.start) >= 0]
        ref = oracles.fixed_word(P.rule.words, T.right, len(patch))
        assert [t.type_index for t in patch] == ref
        pos = 0.0
        lens = [float(x) for x in P.rule.lengths()]
        for t, c in zip(patch, ref):
            assert abs(float(t.start) - pos) < 1e-9
            pos += lens[c - 1]
        break


@pytest.mark.parametrize("poly", [GOLDEN, TRIBONACCI, NONSIMPLE_P2])
def test_window_translation_and_substitution(poly):
    P = pipe(poly)
    f = P.field
    rng = random.Random(7)
    fam = canonical_periodic_tilings(P.rule)
    for _ in range(10):
        T = fam[rng.randrange(len(fam))]
        t = f.rational(Fraction(rng.randrange(-300, 300), 37))
        lo, hi = f.rational(Fraction(rng.randrange(-40, 0), 7)), f.rational(Fraction(rng.randrange(1, 40), 7))
        moved = window(translate_tiling(T, t), lo, hi)
        assert moved.tiles == window(T, lo + t, hi + t).translate(t).tiles
        # Psi(T - t) = Psi(T) - beta t
        lhs = substitute_tiling(translate_tiling(T, t))
        rhs = translate_tiling(substitute_tiling(T), f.beta * t)
        assert lhs.same_tiling(rhs)
        # window(Psi T, beta lo, beta hi) is the inflation of window(T, lo, hi)
        inner = window(T, lo, hi)
        big = window(substitute_tiling(T), inner[0].start * f.beta, inner[-1].end * f.beta)
        expected = []
        for tile in inner:
            pos = tile.start * f.beta
            for c in P.rule.image(tile.type_index):
                expected.append((c, pos))
                pos = pos + P.rule.lengths()[c - 1]
        assert [(x.type_index, x.start) for x in big] == expected
        assert patches_allowed(P.rule, moved)


def test_locate_half_open(golden):
    f = golden.field
    T = family(GOLDEN)["T_1^0"]
    assert locate(T, f.beta - 2).type_index == 2
    assert locate(T, f.zero).type_index == 1
    assert sign_of(locate(T, -f.one / 100).end) == 0


def test_stable_equivalence_examples(golden):
    f = golden.field
    fam = family(GOLDEN)
    T, T0 = fam["T_1"], fam["T_1^0"]
    r = stable_equiv_test(T, T0, (f.beta - 2) / 2, 60)
    assert isinstance(r, Coincides) and r.k <= 60
    for j in (r.k + 1, r.k + 2):
        assert isinstance(stable_equiv_test(T, T0, (f.beta - 2) / 2, j), Coincides)
    assert isinstance(stable_equiv_test(T, T0, f.zero, 0), Unknown)
    # the two tilings agree to the right of t0 = 1
    assert stable_equiv_test(T, T0, f.rational(Fraction(3, 2)), 0) == Coincides(0)


def test_dense_scan(golden):
    fam = family(GOLDEN)
    rep = dense_stable_scan(fam["T_1"], fam["T_1^0"], 0, 1, 64, 60)
    assert rep["fraction"] == 1.0 and not rep["failures"]
    assert dense_stable_scan(fam["T_1"], fam["T_1^0"], 0, 1, 1, 60)["grid"] == 1
    low = dense_stable_scan(fam["T_1"], fam["T_1^0"], 0, 1, 16, 0)
    assert low["fraction"] <= 1.0


def test_asymptotic_golden_pair(golden):
    f = golden.field
    fam = family(GOLDEN)
    lmin = golden.rule.lengths()[1]
    r = asymptotic_test(fam["T_1^0"], fam["T_1"], lmin * 100)
    assert isinstance(r, Asymptotic) and r.t0 == f.one
    r = asymptotic_test(fam["T_1"], fam["T_1"], 50)
    assert isinstance(r, Asymptotic) and r.agree_everywhere


def test_nonsimple_pair_diverges():
    fam = family(NONSIMPLE_P2)
    r = asymptotic_test(fam["T_1"], fam["T_2"], 100)
    assert isinstance(r, Diverges)
    assert sign_of(r.witness * 2 - 100) > 0


@pytest.mark.parametrize("poly", [GOLDEN, NONSIMPLE_P2, TRIBONACCI, PLASTIC])
def test_digit_itinerary(poly):
    P = pipe(poly)
    for T in canonical_periodic_tilings(P.rule):
        digits = digit_itinerary(T, -6, 12, verify=True)
        assert is_admissible(P.kneading, digits)
    f = P.field
    Tt = translate_tiling(canonical_periodic_tilings(P.rule)[0], f.rational(Fraction(5, 11)))
    assert is_admissible(P.kneading, digit_itinerary(Tt, -4, 15, verify=True))


def test_golden_zero_seed_itinerary():
    T = family(GOLDEN)["T_1^0"]
    assert digit_itinerary(T, 0, 0) == [0]


@pytest.mark.parametrize("poly", [GOLDEN, TRIBONACCI, NONSIMPLE_P2])
def test_certificate(poly):
    assert spectrum_certificate(pipe(poly).rule, 32, 60)["verdict"] == "Certified"


def test_certificate_zero_budget_inconclusive():
    assert spectrum_certificate(pipe(GOLDEN).rule, 16, 0)["verdict"] == "Inconclusive"


def test_fibonacci_family_single_fixed_tiling():
    fam = family(FIBONACCI)
    assert fam
