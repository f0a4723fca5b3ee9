"""
Model Space X_n

This module provides X_n as the fiber product of the height functions on the
upper half-plane and on the clone tree: a point is a pair (z, v) with
log(Im z) = h(v). It covers projections, hyperbolic plane leaves and tree
leaves, certified distance bounds, the barycenter map and the tree median.

Barycenter height ratio: in the ideal triangle (-1, 1, oo) the perpendicular
from -1 to the side (1, oo) is the semicircle of radius 2 about 1, which meets
the symmetry axis x = 0 at height sqrt(3). Rescaling gives the barycenter of
(x, y, oo) at ((x + y) / 2, sqrt(3) / 2 * |y - x|).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from bsgeom.bsgroup import AffElem, act_H2, act_Qn, act_R, act_tree
from bsgeom.config import ExperimentConfig
from bsgeom.errors import BaseMismatchError, EqualPointsError, FiberConditionError, OptimizerConvergenceError
from bsgeom.nadic import Clone, NAdic, clone_containing
from bsgeom.treespace import (
    TreePoint,
    child,
    comparable,
    kappa_vertex,
    line_distance,
    log_base,
    meet,
    tree_dist,
    vertex_height,
)

logger = logging.getLogger(__name__)

Real = Union[int, Fraction, float]
H2Point = Tuple[Real, Real]

BARYCENTER_RATIO = math.sqrt(3.0) / 2.0
FIBER_TOL = 1e-9
_MAX_REFINE_ROUNDS = 60


def _log(y: Real) -> float:
    if isinstance(y, Fraction):
        return math.log(y.numerator) - math.log(y.denominator)
    return math.log(y)


def clone_level(y: Real, n: int) -> Tuple[int, float]:
    """Split log(y) as k log n + t with 0 <= t < log n.

    Exact inputs are compared against powers of n directly so that y = n^k
    always lands on a vertex.
    """
    if y <= 0:
        raise ValueError(f"upper half-plane point needs y > 0, got {y}")
    step = log_base(n)
    if isinstance(y, (int, Fraction)):
        q = Fraction(y)
        k = math.floor(_log(q) / step)
        while Fraction(n) ** k > q:
            k -= 1
        while Fraction(n) ** (k + 1) <= q:
            k += 1
        t = 0.0 if Fraction(n) ** k == q else max(0.0, _log(q) - k * step)
        return k, min(t, math.nextafter(step, 0.0))
    k = math.floor(math.log(y) / step)
    t = math.log(y) - k * step
    if t >= step - 1e-12:
        return k + 1, 0.0
    if t <= 1e-12:
        return k, 0.0
    return k, t


@dataclass(frozen=True)
class FiberPoint:
    """A point of X_n: upper half-plane coordinates and a tree position of equal height."""

    hyp: H2Point
    tree: TreePoint

    def __post_init__(self) -> None:
        if self.hyp[1] <= 0:
            raise FiberConditionError(f"imaginary part must be positive, got {self.hyp[1]}")
        gap = abs(_log(self.hyp[1]) - self.tree.height)
        if gap > FIBER_TOL * max(1.0, abs(self.tree.height)):
            raise FiberConditionError(
                f"plane height {_log(self.hyp[1])} differs from tree height {self.tree.height}"
            )

    @classmethod
    def on_leaf(cls, x: Real, y: Real, zeta: NAdic) -> "FiberPoint":
        """The point over (x, y) in the hyperbolic plane indexed by zeta."""
        k, t = clone_level(y, zeta.n)
        vertex = clone_containing(zeta, k)
        if t == 0.0:
            return cls((x, y), TreePoint(vertex))
        return cls((x, y), TreePoint(vertex, t, zeta.digit(k + 1)))

    @classmethod
    def on_tree_leaf(cls, x: Real, vertex: Clone) -> "FiberPoint":
        """The vertex point of the tree leaf over x."""
        return cls((x, Fraction(vertex.n) ** vertex.k), TreePoint(vertex))

    @property
    def n(self) -> int:
        return self.tree.n

    def __str__(self) -> str:
        return f"(({float(self.hyp[0]):.6g}, {float(self.hyp[1]):.6g}), {self.tree})"


def proj_p(pt: FiberPoint) -> H2Point:
    return pt.hyp


def proj_q(pt: FiberPoint) -> TreePoint:
    return pt.tree


def height(pt: FiberPoint) -> float:
    return pt.tree.height


def act_point(g: AffElem, pt: FiberPoint) -> FiberPoint:
    """The isometric action of g on X_n, componentwise on the fiber product."""
    if g.n != pt.n:
        raise BaseMismatchError(g.n, pt.n)
    hyp = act_H2(g, pt.hyp)
    vertex = act_tree(g, pt.tree.vertex)
    if pt.tree.child_digit is None:
        return FiberPoint(hyp, TreePoint(vertex))
    lower = act_tree(g, child(pt.tree.vertex, pt.tree.child_digit))
    return FiberPoint(hyp, TreePoint(vertex, pt.tree.offset, lower.digit(lower.k)))


def h2_dist(z1: H2Point, z2: H2Point) -> float:
    """Hyperbolic distance in the upper half-plane.

    Uses d = 2 asinh(sqrt(((x1 - x2)^2 + (y1 - y2)^2) / (4 y1 y2))), which is the
    cosh formula rewritten to stay accurate for nearby points.
    """
    x1, y1 = float(z1[0]), float(z1[1])
    x2, y2 = float(z2[0]), float(z2[1])
    if y1 <= 0 or y2 <= 0:
        raise ValueError("upper half-plane points need positive imaginary part")
    return 2.0 * math.asinh(math.sqrt(((x1 - x2) ** 2 + (y1 - y2) ** 2) / (4.0 * y1 * y2)))


def _h2_dist_grid(x: float, y: float, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    return 2.0 * np.arcsinh(np.sqrt(((us - x) ** 2 + (vs - y) ** 2) / (4.0 * y * vs)))


# leaves


@dataclass(frozen=True)
class PlaneLeaf:
    """The hyperbolic plane of X_n lying over the vertical line of zeta."""

    zeta: NAdic

    def contains(self, pt: FiberPoint) -> bool:
        return pt.tree.lower_vertex.contains(self.zeta)

    def point(self, x: Real, y: Real) -> FiberPoint:
        return FiberPoint.on_leaf(x, y, self.zeta)


@dataclass(frozen=True)
class TreeLeaf:
    """The copy of T_n lying over the vertical geodesic above x in the plane."""

    x: Real

    def contains(self, pt: FiberPoint) -> bool:
        return pt.hyp[0] == self.x

    def point(self, vertex: Clone) -> FiberPoint:
        return FiberPoint.on_tree_leaf(self.x, vertex)


def common_plane(pt1: FiberPoint, pt2: FiberPoint) -> Optional[PlaneLeaf]:
    """A hyperbolic plane through both points, if one exists.

    Two points share a plane exactly when their tree positions lie on one
    vertical line; the witness end is taken inside the deeper position.
    """
    if pt1.n != pt2.n:
        raise BaseMismatchError(pt1.n, pt2.n)
    if not comparable(pt1.tree, pt2.tree):
        return None
    a, b = pt1.tree.lower_vertex, pt2.tree.lower_vertex
    deeper = b if a.contains_clone(b) else a
    return PlaneLeaf(deeper.center_nadic())


def leaf_intersection_height(zeta: NAdic, other: NAdic) -> float:
    """Height of the boundary horocycle of the region shared by two plane leaves."""
    return line_distance(zeta, other).height


@dataclass(frozen=True)
class DistanceBounds:
    lo: float
    hi: float
    common_plane: Optional[PlaneLeaf]
    meet_height: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "commonPlane": None if self.common_plane is None else self.common_plane.zeta.to_string(),
            "meetHeight": self.meet_height,
        }


def dist_bounds(
    pt1: FiberPoint, pt2: FiberPoint, config: Optional[ExperimentConfig] = None
) -> DistanceBounds:
    """Certified lower and upper bounds on the distance of two points of X_n.

    The lower bound is the larger of the two projection distances. With a
    common plane the plane distance is exact. Otherwise the upper bound is the
    shortest two-leg path through the region of height <= h(meet) shared by
    planes through the points, found on a grid and refined by bounded scalar
    minimisation in alternating coordinates.

    Raises:
        OptimizerConvergenceError: If refinement does not settle to tolerance, or
            settles below the lower bound
    """
    config = config or ExperimentConfig(n=pt1.n)
    if pt1.n != pt2.n:
        raise BaseMismatchError(pt1.n, pt2.n)
    plane_d = h2_dist(pt1.hyp, pt2.hyp)
    lo = max(plane_d, tree_dist(pt1.tree, pt2.tree))
    leaf = common_plane(pt1, pt2)
    if leaf is not None:
        return DistanceBounds(lo, lo, leaf)

    m = meet(pt1.tree.lower_vertex, pt2.tree.lower_vertex)
    h_meet = vertex_height(m)
    x1, y1 = float(pt1.hyp[0]), float(pt1.hyp[1])
    x2, y2 = float(pt2.hyp[0]), float(pt2.hyp[1])
    hi = _shared_region_path(x1, y1, x2, y2, h_meet, config)
    logger.debug(f"dist_bounds lo={lo:.9g} hi={hi:.9g} meet height={h_meet:.6g}")
    # every two-leg path through the shared region is at least lo long
    if hi < lo - config.optimizer_tol * max(1.0, lo):
        logger.warning(f"Upper bound {hi:.12g} fell below lower bound {lo:.12g}")
        raise OptimizerConvergenceError("upper bound below lower bound", hi, (lo, hi))
    return DistanceBounds(lo, max(hi, lo), None, h_meet)


def _shared_region_path(
    x1: float, y1: float, x2: float, y2: float, h_meet: float, config: ExperimentConfig
) -> float:
    span = max(abs(x1 - x2), y1, y2, 1.0)
    u_lo, u_hi = min(x1, x2) - span, max(x1, x2) + span
    w_hi = h_meet
    w_lo = min(h_meet, math.log(min(y1, y2))) - 2.0 * math.log(config.n) - math.log(span) - 4.0

    def cost(u: float, w: float) -> float:
        v = math.exp(w)
        return h2_dist((x1, y1), (u, v)) + h2_dist((u, v), (x2, y2))

    us = np.linspace(u_lo, u_hi, config.grid_samples)
    ws = np.linspace(w_lo, w_hi, config.grid_samples)
    gu, gw = np.meshgrid(us, ws, indexing="ij")
    gv = np.exp(gw)
    values = _h2_dist_grid(x1, y1, gu, gv) + _h2_dist_grid(x2, y2, gu, gv)
    iu, iw = np.unravel_index(int(np.argmin(values)), values.shape)
    u, w = float(us[iu]), float(ws[iw])
    best = float(values[iu, iw])
    du, dw = us[1] - us[0], ws[1] - ws[0]
    bracket = ((max(u_lo, u - du), min(u_hi, u + du)), (max(w_lo, w - dw), w_hi))

    for _ in range(_MAX_REFINE_ROUNDS):
        previous = best
        res_u = minimize_scalar(
            lambda s: cost(s, w), bounds=bracket[0], method="bounded",
            options={"xatol": config.optimizer_tol},
        )
        if res_u.fun <= best:
            u, best = float(res_u.x), float(res_u.fun)
        res_w = minimize_scalar(
            lambda s: cost(u, s), bounds=(w_lo, w_hi), method="bounded",
            options={"xatol": config.optimizer_tol},
        )
        if res_w.fun <= best:
            w, best = float(res_w.x), float(res_w.fun)
        # recentre the horizontal bracket on the current estimate
        half = max(bracket[0][1] - bracket[0][0], 4.0 * config.optimizer_tol) / 2.0
        bracket = ((max(u_lo, u - half), min(u_hi, u + half)), (w_lo, w_hi))
        if previous - best <= config.optimizer_tol:
            return best
    logger.warning("Distance upper bound refinement did not settle")
    raise OptimizerConvergenceError("upper bound refinement did not converge", best, bracket)


# barycenter and median


def barycenter_pi(x: Real, y: Real, zeta: NAdic) -> FiberPoint:
    """The barycenter of the ideal triangle (x, y, oo) in the plane leaf of zeta.

    Raises:
        EqualPointsError: If x == y
    """
    if x == y:
        raise EqualPointsError("barycenter needs two distinct boundary points")
    if isinstance(x, float) or isinstance(y, float):
        mid: Real = (float(x) + float(y)) / 2.0
    else:
        mid = (Fraction(x) + Fraction(y)) / 2
    return FiberPoint.on_leaf(mid, BARYCENTER_RATIO * abs(float(y) - float(x)), zeta)


def kappa(x: Real, eta: NAdic, zeta: NAdic) -> FiberPoint:
    """The tree median: the point of the tree leaf over x at the vertex where
    the lines to eta and zeta diverge. Its height is -log d(eta, zeta).

    Raises:
        EqualPointsError: If eta == zeta
    """
    return FiberPoint.on_tree_leaf(x, kappa_vertex(eta, zeta))


def act_triple(g: AffElem, x: Real, y: Real, zeta: NAdic) -> Tuple[Real, Real, NAdic]:
    """The diagonal action on (R x R) x Q_n."""
    return act_R(g, x), act_R(g, y), act_Qn(g, zeta)
