"""
A Rauzy cloud for the tribonacci number
=======================================

The stable projections of the vertices of a tiling strand fill out a compact
set in the contracting plane.  This script writes the cloud as CSV and prints
a few summary statistics; plotting is left to whatever tool is at hand.
"""

import sys

import numpy as np

from betatiling import (
    abelianize_and_perron,
    build_substitution,
    canonical_periodic_tilings,
    compute_splitting,
    kneading_of,
    rauzy_cloud,
    verify_pisot,
)

f = verify_pisot("x^3-x^2-x-1")
rule = build_substitution(kneading_of(f), f)
print("substitution:", rule.render(), file=sys.stderr)

A, perron, _ = abelianize_and_perron(rule, f)
S = compute_splitting(A, f, perron)
T = canonical_periodic_tilings(rule)[0]

cloud = rauzy_cloud(T, S, 5000)
pts = cloud["points"]
print(f"{len(pts)} points, radius {np.linalg.norm(pts, axis=1).max():.4f} "
      f"(a priori bound {cloud['bound']:.4f})", file=sys.stderr)

# Colour by the type of the tile that produced each vertex, if you plot it.
np.savetxt(sys.stdout, pts, delimiter=",", fmt="%.10f")
