"""
Classification Tools

This module provides tools for the commensurability and classification
algebra: presentations of Gamma, dihedral endomorphisms, mapping torus
dimensions and the torsion-free case.
"""

import logging
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field

from bsgeom.rigidity import (
    MODE_OF_CASE,
    GammaCase,
    commensurable,
    cohomology_profile,
    dihedral_endo,
    endo_index,
    enumerate_gamma,
    primitive_root,
    torsionfree_classify,
    vcd_mapping_torus,
)
from bsgeom.tools.parsing import parse_matrix

logger = logging.getLogger(__name__)


class ClassifyParams(BaseModel):
    """Parameters for one case of the classification."""
    case: Literal["1", "2", "3i", "3ii"] = Field(..., description="Case 1, 2, 3i or 3ii")
    m: int = Field(..., description="Parameter m (Case 2 takes m <= -2)")
    k: Optional[int] = Field(None, description="k with m = 2k + 1 in case 3ii")
    reflections: int = Field(5, ge=0, le=50, description="Reflections r_i listed for |i| <= this")


class CommensurableParams(BaseModel):
    """Parameters for the commensurability test of BS(1,m) and BS(1,n)."""
    m: int = Field(..., ge=2, description="First parameter")
    n: int = Field(..., ge=2, description="Second parameter")


class TorsionFreeParams(BaseModel):
    """Parameters for the torsion-free classification."""
    k: int = Field(..., description="Parameter of BS(1,k), |k| >= 2")


class IndexParams(BaseModel):
    """Parameters for the index of an injective endomorphism of Z^r."""
    matrix: str = Field(..., description='Square integer matrix as JSON, e.g. "[[2,1],[0,3]]"')
    index: Optional[int] = Field(None, ge=2, description="Tree valence I for the cohomology profile")


def classify_case(params: ClassifyParams) -> Dict[str, Any]:
    """
    The presentation of Gamma in one case, with its realisation checks.

    Args:
        params: Parameters naming the case and its parameters

    Returns:
        Dict with the generators, relations, GAP text and, in case 3, the
        dihedral endomorphism with its reflection table
    """
    try:
        case = GammaCase(params.case)
        presentation = enumerate_gamma(case, params.m, params.k)
        result: Dict[str, Any] = {
            **presentation.to_json(),
            "realizationHolds": presentation.check_realization(),
        }
        if case in MODE_OF_CASE:
            endo = dihedral_endo(presentation.m, presentation.k, MODE_OF_CASE[case])
            radius = params.reflections
            result["endomorphism"] = {
                **endo.to_json(),
                "realizationHolds": endo.check_realization(),
                "fixedReflections": endo.fixed_reflections(radius),
                "injectiveOnBall": endo.is_injective_on_ball(12),
            }
            result["rows"] = [
                {"i": i, "image": endo.reflection_index(i)} for i in range(-radius, radius + 1)
            ]
        return result
    except Exception as e:
        logger.error(f"Error classifying case {params.case}: {str(e)}")
        raise


def commensurability(params: CommensurableParams) -> Dict[str, Any]:
    """
    Whether BS(1,m) and BS(1,n) are commensurable: m and n are powers of one integer.

    Args:
        params: Parameters naming m and n

    Returns:
        Dict with both primitive roots and the verdict
    """
    try:
        rm, em = primitive_root(params.m)
        rn, en = primitive_root(params.n)
        return {
            "m": {"value": params.m, "root": rm, "exponent": em},
            "n": {"value": params.n, "root": rn, "exponent": en},
            "commensurable": commensurable(params.m, params.n),
        }
    except Exception as e:
        logger.error(f"Error testing commensurability: {str(e)}")
        raise


def torsion_free(params: TorsionFreeParams) -> Dict[str, Any]:
    """
    The torsion-free group BS(1,k) and its commensurability class.

    Args:
        params: Parameters naming k

    Returns:
        Dict with the presentation and the class, read through BS(1,k^2) when k < 0
    """
    try:
        return torsionfree_classify(params.k).to_json()
    except Exception as e:
        logger.error(f"Error in torsion-free classification: {str(e)}")
        raise


def mapping_torus(params: IndexParams) -> Dict[str, Any]:
    """
    Index, vcd and cohomology profile of the ascending HNN extension of Z^r.

    Args:
        params: Parameters holding the matrix and optionally the tree valence

    Returns:
        Dict with r, I = |det|, vcd = r + 1 and the degree profile
    """
    try:
        matrix = parse_matrix(params.matrix)
        r = len(matrix)
        index = endo_index(matrix)
        result: Dict[str, Any] = {
            "rank": r,
            "index": index,
            "vcd": vcd_mapping_torus(r),
            "excludedByGrowth": index == 1,
        }
        valence = params.index if params.index is not None else index
        if valence >= 2:
            profile = cohomology_profile(r, valence)
            result["cohomology"] = {str(k): v for k, v in profile.items()}
        return result
    except Exception as e:
        logger.error(f"Error analysing mapping torus: {str(e)}")
        raise
