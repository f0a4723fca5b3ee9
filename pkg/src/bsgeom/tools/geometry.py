"""
Geometry Tools

This module provides tools for points of X_n: distance bounds, the barycenter
map and the tree median.
"""

import logging
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field

from bsgeom.config import ExperimentConfig
from bsgeom.export import leaf_svg
from bsgeom.fibercomplex import FiberPoint, barycenter_pi, dist_bounds, kappa
from bsgeom.tools.parsing import parse_nadic, parse_rational

logger = logging.getLogger(__name__)


class PointSpec(BaseModel):
    """A point of X_n given by its plane coordinates and a plane leaf."""
    x: str = Field(..., description="Real part (exact rational)")
    y: str = Field(..., description="Imaginary part, > 0 (exact rational)")
    zeta: str = Field("0", description="End in Q_n indexing the plane leaf")


class DistParams(BaseModel):
    """Parameters for distance bounds between two points of X_n."""
    n: int = Field(2, ge=2, description="Base n")
    p: PointSpec = Field(..., description="First point")
    q: PointSpec = Field(..., description="Second point")


class BarycenterParams(BaseModel):
    """Parameters for the barycenter of (x, y, zeta) and the median of (x, eta, zeta)."""
    n: int = Field(2, ge=2, description="Base n")
    x: str = Field(..., description="First real boundary point")
    y: str = Field(..., description="Second real boundary point, different from x")
    zeta: str = Field("0", description="End in Q_n")
    eta: Optional[str] = Field(None, description="Second end in Q_n for the tree median")
    format: Literal["json", "svg"] = Field("json", description="svg draws the plane leaf")


def _point(spec: PointSpec, n: int) -> FiberPoint:
    return FiberPoint.on_leaf(parse_rational(spec.x), parse_rational(spec.y), parse_nadic(spec.zeta, n))


def _point_json(pt: FiberPoint) -> Dict[str, Any]:
    return {
        "hyp": [str(pt.hyp[0]), float(pt.hyp[1])],
        "tree": str(pt.tree),
        "height": pt.tree.height,
    }


def dist_info(params: DistParams, config: Optional[ExperimentConfig] = None) -> Dict[str, Any]:
    """
    Certified lower and upper bounds on the distance of two points of X_n.

    Args:
        params: Parameters naming the two points
        config: Grid size and optimiser tolerance

    Returns:
        Dict with lo, hi and the certificate ("exact" on a common plane)
    """
    config = config or ExperimentConfig.from_env(n=params.n)
    try:
        p, q = _point(params.p, params.n), _point(params.q, params.n)
        bounds = dist_bounds(p, q, config.with_overrides(n=params.n))
        return {
            "p": _point_json(p),
            "q": _point_json(q),
            **bounds.to_json(),
            "certificate": "exact" if bounds.common_plane is not None else "bracket",
        }
    except Exception as e:
        logger.error(f"Error bounding distance: {str(e)}")
        raise


def barycenter_info(params: BarycenterParams) -> Dict[str, Any]:
    """
    The barycenter pi(x, y, zeta) and, with eta, the median kappa(x, eta, zeta).

    Args:
        params: Parameters naming the boundary points

    Returns:
        Dict with the points, or the SVG of the plane leaf
    """
    try:
        x, y = parse_rational(params.x), parse_rational(params.y)
        zeta = parse_nadic(params.zeta, params.n)
        center = barycenter_pi(x, y, zeta)
        result: Dict[str, Any] = {"barycenter": _point_json(center), "certificate": "float"}
        if params.eta is not None:
            eta = parse_nadic(params.eta, params.n)
            result["median"] = {**_point_json(kappa(x, eta, zeta)), "certificate": "exact"}
        if params.format == "svg":
            result["svg"] = leaf_svg(zeta, x, y)
        return result
    except Exception as e:
        logger.error(f"Error computing barycenter: {str(e)}")
        raise
