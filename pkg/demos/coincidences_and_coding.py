"""
Coincidences, certificates and the arithmetical coding
======================================================

For a field whose expansion of 1 is strictly preperiodic with period two,
there are four canonical periodic tilings.  Some pairs are asymptotic, some
are not; yet every pair becomes stably equivalent at a dense set of
translates, which is what the spectrum certificate samples.  The last part
checks that the factor map agrees with the digit-coding of each tiling.
"""

from fractions import Fraction

from betatiling import (
    abelianize_and_perron,
    asymptotic_test,
    build_substitution,
    canonical_periodic_tilings,
    compute_splitting,
    kneading_of,
    solenoid_map,
    spectrum_certificate,
    translate_tiling,
    verify_pisot,
)
from betatiling.geometry import arithmetical_code, tiling_digits

f = verify_pisot("x^3-2x^2-x+1")
k = kneading_of(f)
rule = build_substitution(k, f)
print("expansion of 1:", k.render(), " substitution:", rule.render())

fam = canonical_periodic_tilings(rule)
print("canonical tilings:", ", ".join(f"{T.label} ({T.seed()})" for T in fam))

for a in range(len(fam)):
    for b in range(a + 1, len(fam)):
        r = asymptotic_test(fam[a], fam[b], 100)
        print(f"  {fam[a].label:>5} vs {fam[b].label:<5} {type(r).__name__}")

cert = spectrum_certificate(rule, grid=64, K=60)
worst = max(p["max_k"] for p in cert["pairs"])
print("certificate:", cert["verdict"], f"(deepest coincidence needed {worst} inflations)")

A, perron, _ = abelianize_and_perron(rule, f)
S = compute_splitting(A, f, perron)
T = translate_tiling(fam[0], f.rational(Fraction(5, 13)))
lhs = solenoid_map(T, S, 4)
rhs = arithmetical_code(tiling_digits(T, S).shift_right(), S, 4)
print("factor map agrees with the coding:", lhs.distance_at_most(rhs, Fraction(1, 10**8)))
