"""
BSGeom Quasisimilarities

This package contains PL homeomorphisms of R, their stretch profiles and the
conjugacy engine that straightens cyclic uniform quasisimilarity actions.
"""

from bsgeom.quasisim.conjugacy import (
    Affine,
    ConjugacyResult,
    OrbitConjugacy,
    classify,
    conjugate_auto,
    conjugate_to_dilation,
    conjugate_to_translation,
    verify_rubber_band,
)
from bsgeom.quasisim.intervals import QuasiHom, extract_stretch, power_stretch_profile
from bsgeom.quasisim.plhomeo import PLHomeo, StretchInterval, compose, inverse, power

__all__ = [
    "Affine",
    "ConjugacyResult",
    "OrbitConjugacy",
    "PLHomeo",
    "QuasiHom",
    "StretchInterval",
    "classify",
    "compose",
    "conjugate_auto",
    "conjugate_to_dilation",
    "conjugate_to_translation",
    "extract_stretch",
    "inverse",
    "power",
    "power_stretch_profile",
    "verify_rubber_band",
]
