"""
The golden-mean example, end to end
===================================

Start from x^2 - 3x + 1, whose dominant root beta = (3 + sqrt 5)/2 is a
Pisot number, and walk through the whole pipeline: the expansion of 1, the
two prototiles, the substitution read off from the beta-transformation, the
two canonical tilings and where they meet, and finally their image on the
2-torus.
"""

from fractions import Fraction

from betatiling import (
    abelianize_and_perron,
    asymptotic_test,
    build_substitution,
    canonical_periodic_tilings,
    compute_splitting,
    kneading_of,
    shadow_factor_map,
    translate_tiling,
    verify_pisot,
    window,
)
from betatiling.polynomials import format_polynomial


def show(x):
    return format_polynomial(list(x.coords), "beta")


# Certify the polynomial; every later number lives exactly in Q(beta).
f = verify_pisot("x^2-3x+1")
lo, hi = f.beta_enclosure
print(f"beta lies in [{float(lo):.12f}, {float(hi):.12f}]")

# The quasi-greedy expansion of 1 is 2 followed by ones forever.
k = kneading_of(f)
print("expansion of 1:", k.render())

# Its orbit cuts [0, 1] into two prototiles; beta maps each over a union of cells.
rule = build_substitution(k, f)
for t in rule.prototiles:
    print(f"tile {t.index}: [{show(t.min)}, {show(t.max)}]")
print("substitution:", rule.render())

A, perron, primitive = abelianize_and_perron(rule, f)
print("count matrix:", A.tolist(), "primitive:", primitive)

# Two tilings are periodic under the inflation: T_1 (seed 1|2) and T_1^0 (seed 1|1).
fam = {T.label: T for T in canonical_periodic_tilings(rule)}
for label, T in fam.items():
    print(label, "near the origin:", [t.type_index for t in window(T, -2, 4)])

# They disagree at the origin yet agree from t0 on.
shortest = rule.lengths()[1]
r = asymptotic_test(fam["T_1^0"], fam["T_1"], 100 * shortest)
print("asymptotic from t0 =", show(r.t0))

# The factor map onto the torus sends translation by t to rotation by -t omega.
S = compute_splitting(A, f, perron)
T = fam["T_1"]
for t in (Fraction(0), Fraction(1, 3), Fraction(2, 7)):
    p = shadow_factor_map(translate_tiling(T, f.rational(t)), S)
    print(f"pi(T_1 - {t}) =", [round(x, 9) for x in p.floats()])
