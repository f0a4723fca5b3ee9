"""
Dynamics Tools

This module provides tools for the actions of BS(1,n) on triple spaces:
proper-discontinuity censuses, cocompactness witnesses, contraction elements
and source-sink probes.
"""

import logging
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

from bsgeom.bsgroup import eval_word, power
from bsgeom.config import ExperimentConfig
from bsgeom.dynamics import (
    CompactBlock,
    RealInterval,
    TripleRRQ,
    cocompact_witness,
    contraction_element,
    control_block,
    pd_census,
    source_sink_probe,
    standard_block,
)
from bsgeom.tools.parsing import parse_clone, parse_nadic, parse_rational

logger = logging.getLogger(__name__)


class CensusParams(BaseModel):
    """Parameters for a proper-discontinuity census."""
    n: int = Field(2, ge=2, description="Base n")
    block: str = Field(
        "standard",
        description='"standard" ([0,1]x[2,3]xZ), "control" ([0,1]x[2,3]x[4,5]) or a block literal',
    )
    radius: int = Field(6, ge=0, description="Largest word radius L")


class ContractParams(BaseModel):
    """Parameters for a contraction element taking one clone into another."""
    n: int = Field(2, ge=2, description="Base n")
    source: str = Field(..., description='Clone K, "Z" or k:low:digits')
    target: str = Field(..., description='Clone U, "Z" or k:low:digits')


class CocompactParams(BaseModel):
    """Parameters for the cocompactness witness of a triple (x, y, zeta)."""
    n: int = Field(2, ge=2, description="Base n")
    x: str = Field(..., description="First real coordinate")
    y: str = Field(..., description="Second real coordinate, different from x")
    zeta: str = Field("0", description="End in Q_n")


class ProbeParams(BaseModel):
    """Parameters for a source-sink probe along the powers of one element."""
    n: int = Field(2, ge=2, description="Base n")
    word: str = Field("b", description="Word for g; the probe follows g, g^2, ..., g^steps")
    steps: int = Field(12, ge=2, le=200, description="Number of powers")
    interval: str = Field("[0,1]", description="Compact interval of R")
    clone: str = Field("Z", description="Compact clone of Q_n")


def _block(text: str, n: int) -> CompactBlock:
    if text == "standard":
        return standard_block(n)
    if text == "control":
        return control_block(n)
    return CompactBlock.parse(text, n)


def census(params: CensusParams, config: Optional[ExperimentConfig] = None) -> Dict[str, Any]:
    """
    Count the elements g of each ball with gA meeting A.

    Args:
        params: Parameters naming the block and the radius
        config: Budgets; the ball budget bounds the enumeration

    Returns:
        Dict with the counts per radius, the stabilisation radius and the elements
    """
    config = config or ExperimentConfig.from_env()
    try:
        result = pd_census(_block(params.block, params.n), params.radius, config.ball_budget)
        return {**result.to_json(), "rows": result.to_rows(), "certificate": "exact"}
    except Exception as e:
        logger.error(f"Error running census: {str(e)}")
        raise


def contract(params: ContractParams) -> Dict[str, Any]:
    """
    An element g with gK inside U and the least b-exponent that achieves it.

    Args:
        params: Parameters naming the clones K and U

    Returns:
        Dict with the element, its word, the exponent and the image clone
    """
    try:
        k_clone = parse_clone(params.source, params.n)
        u_clone = parse_clone(params.target, params.n)
        return {**contraction_element(k_clone, u_clone).to_json(), "certificate": "exact"}
    except Exception as e:
        logger.error(f"Error building contraction: {str(e)}")
        raise


def cocompact(params: CocompactParams, config: Optional[ExperimentConfig] = None) -> Dict[str, Any]:
    """
    An element moving a triple into the fundamental block.

    Args:
        params: Parameters naming the triple
        config: The recorded word-length constant

    Returns:
        Dict with the element, the normalised triple and the word-length bound
    """
    config = config or ExperimentConfig.from_env()
    try:
        t = TripleRRQ(
            parse_rational(params.x), parse_rational(params.y), parse_nadic(params.zeta, params.n)
        )
        witness = cocompact_witness(t, config.witness_length_constant)
        return {**witness.to_json(), "certificate": "exact"}
    except Exception as e:
        logger.error(f"Error building cocompactness witness: {str(e)}")
        raise


def probe(params: ProbeParams) -> Dict[str, Any]:
    """
    Follow the powers of g on a clone and their inverses on an interval.

    Args:
        params: Parameters naming g, the number of steps and the compacta

    Returns:
        Dict with the sink and source candidates, the sup-distance series and
        the contraction rates, plus one row per step
    """
    try:
        g = eval_word(params.word, params.n)
        gs = [power(g, m) for m in range(1, params.steps + 1)]
        lo, hi = params.interval.strip().strip("[]").split(",")
        report = source_sink_probe(
            gs, RealInterval(parse_rational(lo), parse_rational(hi)), parse_clone(params.clone, params.n)
        )
        data = report.to_json()
        series = data["series"]
        rows = [
            {"index": i, "supQ": q, "supR": r}
            for i, q, r in zip(series["index"], series["supQ"], series["supR"])
        ]
        return {**data, "rows": rows}
    except Exception as e:
        logger.error(f"Error running source-sink probe: {str(e)}")
        raise
