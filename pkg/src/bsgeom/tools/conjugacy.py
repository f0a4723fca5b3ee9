"""
Conjugacy Tools

This module provides tools for PL homeomorphisms of R: classification,
power stretch profiles and conjugacy to a translation or a dilation.
"""

import logging
from typing import Any, Dict, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from bsgeom.config import ExperimentConfig
from bsgeom.quasisim import (
    PLHomeo,
    classify,
    conjugate_auto,
    conjugate_to_dilation,
    conjugate_to_translation,
    extract_stretch,
    power_stretch_profile,
)
from bsgeom.quasisim.intervals import nested_interval_pairs, qs_constant_from_interval
from bsgeom.quasisim.plhomeo import stretch_interval
from bsgeom.tools.parsing import parse_rational

logger = logging.getLogger(__name__)

SAMPLE_POINTS = 21


class ConjugateParams(BaseModel):
    """Parameters for conjugating a PL homeomorphism to an affine model."""
    map: Dict[str, Any] = Field(..., description="plhomeo.v1 document")
    mode: Literal["auto", "translation", "dilation"] = Field("auto", description="Target model")
    x0: str = Field("0", description="Base point of the translation seed domain")
    radius: int = Field(32, ge=2, description="Power radius M of the stretch profile")
    sample_window: float = Field(10.0, gt=0, description="Half-width of the sampled phi table")


class ProfileParams(BaseModel):
    """Parameters for the power stretch profile of a PL homeomorphism."""
    map: Dict[str, Any] = Field(..., description="plhomeo.v1 document")
    radius: int = Field(16, ge=1, description="Power radius M")


def conjugate_map(params: ConjugateParams, config: Optional[ExperimentConfig] = None) -> Dict[str, Any]:
    """
    Build phi with phi o f o phi^-1 affine and report its certificates.

    Args:
        params: Parameters holding the map and the target model
        config: Breakpoint cap and the conjugacy check grid

    Returns:
        Dict with the case, s or alpha, the measured and certified bilipschitz
        constants, the sup conjugacy error and a sampled phi table
    """
    config = config or ExperimentConfig.from_env()
    try:
        f = PLHomeo.from_json(params.map)
        if params.mode == "translation":
            result = conjugate_to_translation(f, parse_rational(params.x0), params.radius, config)
        elif params.mode == "dilation":
            result = conjugate_to_dilation(f, params.radius, config)
        else:
            result = conjugate_auto(f, params.radius, config)
        xs = np.linspace(-params.sample_window, params.sample_window, SAMPLE_POINTS)
        ys = result.phi.evaluate(xs)
        key = "s" if result.case == "dilation" else "alpha"
        return {
            **result.to_json(),
            key: float(result.value),
            "rows": [{"x": float(x), "phi": float(y)} for x, y in zip(xs, ys)],
        }
    except Exception as e:
        logger.error(f"Error conjugating map: {str(e)}")
        raise


def profile_map(params: ProfileParams, config: Optional[ExperimentConfig] = None) -> Dict[str, Any]:
    """
    Classify a map and extract its stretch from the nested power intervals.

    Args:
        params: Parameters holding the map and the power radius
        config: Breakpoint cap and the declared quasisimilarity constant

    Returns:
        Dict with the classification, the stretch interval and quasisimilarity
        constant of f, the profile constant and the stretch estimate
    """
    config = config or ExperimentConfig.from_env()
    try:
        f = PLHomeo.from_json(params.map)
        kind = classify(f, params.radius, config)
        result: Dict[str, Any] = {
            "classification": kind.to_json(),
            "stretchInterval": stretch_interval(f).to_json(),
            "qsConstant": str(qs_constant_from_interval(f)),
        }
        if f.increasing:
            profile = power_stretch_profile(f, params.radius, config.breakpoint_cap)
            result["profile"] = profile.to_json()
            result["nestedPairsChecked"] = nested_interval_pairs(profile, params.radius)
            result["estimate"] = extract_stretch(profile, params.radius).to_json()
        return result
    except Exception as e:
        logger.error(f"Error profiling map: {str(e)}")
        raise
