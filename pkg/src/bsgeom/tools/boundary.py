"""
Boundary Tools

This module provides tools for the n-adic boundary Q_n and the clone tree T_n.
"""

import logging
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from bsgeom.export import tree_dot, tree_json, tree_svg
from bsgeom.nadic import (
    NAdic,
    agreement_index,
    clone_containing,
    clone_relation,
    nadic_add,
    nadic_dist,
    nadic_mul,
    nadic_neg,
)
from bsgeom.tools.parsing import parse_clone, parse_nadic
from bsgeom.treespace import kappa_vertex, line_distance, truncation

logger = logging.getLogger(__name__)


class NAdicParams(BaseModel):
    """Parameters for n-adic arithmetic and metric queries."""
    n: int = Field(2, ge=2, description="Base n")
    x: str = Field(..., description="First element: a rational or a literal n:low:pre|per")
    y: Optional[str] = Field(None, description="Second element for sum, product and distance")
    k: Optional[int] = Field(None, description="Height of the clone containing x")
    k_other: Optional[int] = Field(None, description="Height of the clone containing y (defaults to k)")


class TreeParams(BaseModel):
    """Parameters for a finite truncation of T_n."""
    n: int = Field(2, ge=2, description="Base n")
    root: str = Field("Z", description='Root clone, "Z" or a label k:low:digits')
    depth: int = Field(3, ge=0, le=12, description="Levels below the root")
    up: int = Field(0, ge=0, le=12, description="Levels above the root")
    ends: List[str] = Field(default_factory=list, description="Zero or two ends whose lines are compared")
    highlight: Optional[str] = Field(None, description="End whose vertical line is drawn in the SVG")
    format: Literal["json", "dot", "svg"] = Field("json", description="Rendering of the truncation")


def _describe(x: NAdic) -> Dict[str, Any]:
    return {
        "literal": x.to_string(),
        "value": str(x.to_fraction()),
        "inIntegers": x.in_integers(),
        "terminating": x.is_terminating,
    }


def nadic_info(params: NAdicParams) -> Dict[str, Any]:
    """
    Arithmetic, distance and clone data for one or two elements of Q_n.

    Args:
        params: Parameters naming the elements and clone heights

    Returns:
        Dict with the elements, their sum, product, distance and clones
    """
    try:
        x = parse_nadic(params.x, params.n)
        result: Dict[str, Any] = {"n": params.n, "x": _describe(x), "neg": _describe(nadic_neg(x))}
        y = None
        if params.y is not None:
            y = parse_nadic(params.y, params.n)
            dist = nadic_dist(x, y)
            result.update(
                {
                    "y": _describe(y),
                    "sum": _describe(nadic_add(x, y)),
                    "product": _describe(nadic_mul(x, y)),
                    "dist": {"value": str(dist), "float": float(dist), "certificate": "exact"},
                    "agreementIndex": agreement_index(x, y),
                }
            )
        if params.k is not None:
            cx = clone_containing(x, params.k)
            result["clone"] = {"label": str(cx), "radius": str(cx.radius), "center": str(cx.center)}
            if y is not None:
                k_other = params.k if params.k_other is None else params.k_other
                cy = clone_containing(y, k_other)
                result["cloneOther"] = {"label": str(cy), "radius": str(cy.radius)}
                result["relation"] = clone_relation(cx, cy).value
        return result
    except Exception as e:
        logger.error(f"Error in n-adic query: {str(e)}")
        raise


def tree_info(params: TreeParams) -> Dict[str, Any]:
    """
    A truncation of T_n below (and above) a root clone.

    Args:
        params: Parameters for the truncation and its rendering

    Returns:
        Dict with the truncation as node-link JSON, DOT text or SVG, and the
        divergence vertex of two ends when given
    """
    try:
        root = parse_clone(params.root, params.n)
        graph = truncation(root, params.depth, params.up)
        result: Dict[str, Any] = {
            "n": params.n,
            "root": str(root),
            "vertices": graph.number_of_nodes(),
            "edges": graph.number_of_edges(),
        }
        if params.ends:
            if len(params.ends) != 2:
                raise ValueError("give exactly two ends to compare")
            eta, zeta = (parse_nadic(e, params.n) for e in params.ends)
            divergence = line_distance(eta, zeta)
            result["lines"] = {
                "kappa": str(kappa_vertex(eta, zeta)),
                "height": divergence.height,
                "value": str(divergence.value),
                "certificate": "exact",
            }
        if params.format == "dot":
            result["dot"] = tree_dot(graph)
        elif params.format == "svg":
            highlight = None if params.highlight is None else parse_nadic(params.highlight, params.n)
            result["svg"] = tree_svg(graph, highlight)
        else:
            result["graph"] = tree_json(graph)
        return result
    except Exception as e:
        logger.error(f"Error building tree truncation: {str(e)}")
        raise
