"""
Group Tools

This module provides tools for words, normal forms and growth in BS(1,n).
"""

import logging
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

from bsgeom.bsgroup import (
    GroupWord,
    eval_word,
    growth,
    growth_rate_estimates,
    is_identity,
    normal_form_word,
    proper_discontinuity_witness,
    stretch_Qn,
    stretch_R,
)
from bsgeom.config import ExperimentConfig
from bsgeom.rigidity import growth_comparison

logger = logging.getLogger(__name__)


class WordParams(BaseModel):
    """Parameters for evaluating a word in a, b (capitals are inverses)."""
    n: int = Field(2, ge=2, description="Base n of BS(1,n)")
    word: str = Field(..., description='Word such as "bAbaa" or "b a^-2 B"')


class GrowthParams(BaseModel):
    """Parameters for ball growth."""
    n: int = Field(2, ge=2, description="Base n of BS(1,n)")
    radius: int = Field(8, ge=0, description="Largest word radius L")
    control_radius: Optional[int] = Field(
        None, ge=2, description="Radius of the Z^2 quadratic control, omitted to skip it"
    )


class WitnessParams(BaseModel):
    """Parameters for the proper-discontinuity witnesses g_k = x + k/n^k."""
    n: int = Field(2, ge=2, description="Base n of BS(1,n)")
    count: int = Field(8, ge=1, le=64, description="Number of witnesses k = 1..count")


def word_info(params: WordParams) -> Dict[str, Any]:
    """
    Evaluate a word to its affine normal form.

    Args:
        params: Parameters naming the base and the word

    Returns:
        Dict with the element, its normal-form word and its stretch factors
    """
    try:
        word = GroupWord.parse(params.word)
        g = eval_word(word, params.n)
        nf = normal_form_word(g)
        return {
            "word": str(word),
            "reduced": str(word.free_reduce()),
            "element": g.to_json(),
            "map": str(g),
            "identity": is_identity(g),
            "normalForm": str(nf),
            "normalFormLength": len(nf),
            "stretchR": str(stretch_R(g)),
            "stretchQn": str(stretch_Qn(g)),
            "certificate": "exact",
        }
    except Exception as e:
        logger.error(f"Error evaluating word: {str(e)}")
        raise


def growth_info(params: GrowthParams, config: Optional[ExperimentConfig] = None) -> Dict[str, Any]:
    """
    Ball sizes beta(0..L) of BS(1,n), optionally set against Z^2.

    Args:
        params: Parameters naming the base and the radius
        config: Budgets; the ball budget bounds the enumeration

    Returns:
        Dict with the counts, the log-growth rates and one row per radius
    """
    config = config or ExperimentConfig.from_env()
    try:
        if params.control_radius is not None:
            comparison = growth_comparison(
                params.n, params.radius, params.control_radius, config.ball_budget
            )
            counts, rates = comparison.bs_counts, comparison.bs_rates
            extra: Dict[str, Any] = {"comparison": comparison.to_json()}
        else:
            counts = growth(params.n, params.radius, config.ball_budget)
            rates = growth_rate_estimates(counts)
            extra = {}
        rows = [
            {"radius": L, "count": c, "rate": (rates[L - 1] if L else None)}
            for L, c in enumerate(counts)
        ]
        return {"n": params.n, "counts": counts, "rates": rates, "rows": rows, **extra}
    except Exception as e:
        logger.error(f"Error computing growth: {str(e)}")
        raise


def discontinuity_info(params: WitnessParams) -> Dict[str, Any]:
    """
    The witnesses g_k: their displacement shrinks on R but not on Q_n.

    Args:
        params: Parameters naming the base and the number of witnesses

    Returns:
        Dict with one row per k
    """
    try:
        rows = []
        for k in range(1, params.count + 1):
            w = proper_discontinuity_witness(k, params.n)
            rows.append(
                {
                    "k": k,
                    "element": str(w.element),
                    "realSize": str(w.real_size),
                    "nadicSize": str(w.nadic_size),
                }
            )
        return {"n": params.n, "rows": rows, "certificate": "exact"}
    except Exception as e:
        logger.error(f"Error building discontinuity witnesses: {str(e)}")
        raise
