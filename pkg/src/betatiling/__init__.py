"""Exact beta-substitutions for Pisot numbers."""
from .algebra import AlgNum, PisotField, floor_of, in_z_inv_beta, sign_of, verify_pisot
from .geometry import (
    SolenoidPoint,
    SplittingData,
    TorusPoint,
    TwoSidedDigits,
    arithmetical_code,
    compute_splitting,
    fundamental_homoclinic,
    rauzy_cloud,
    shadow_factor_map,
    solenoid_map,
)
from .numeration import greedy_expansion, is_admissible, kneading_of, property_w_witness
from .substitution import abelianize_and_perron, build_substitution, verify_language_properties
from .tiling import (
    asymptotic_test,
    canonical_periodic_tilings,
    spectrum_certificate,
    substitute_tiling,
    translate_tiling,
    window,
)

__all__ = [
    "AlgNum",
    "PisotField",
    "SolenoidPoint",
    "SplittingData",
    "TorusPoint",
    "TwoSidedDigits",
    "abelianize_and_perron",
    "arithmetical_code",
    "asymptotic_test",
    "build_substitution",
    "canonical_periodic_tilings",
    "compute_splitting",
    "floor_of",
    "fundamental_homoclinic",
    "greedy_expansion",
    "in_z_inv_beta",
    "is_admissible",
    "kneading_of",
    "property_w_witness",
    "rauzy_cloud",
    "shadow_factor_map",
    "sign_of",
    "solenoid_map",
    "spectrum_certificate",
    "substitute_tiling",
    "translate_tiling",
    "verify_language_properties",
    "verify_pisot",
    "window",
]
