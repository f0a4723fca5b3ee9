"""
Cyclic Conjugacy Engine

This module classifies an orientation preserving PL homeomorphism f of R
(orientation reversing maps are analysed through f^2) and builds a
bilipschitz conjugacy phi to its affine model:

- no fixed point: phi o f o phi^-1 is the translation by alpha = f(x0) - x0
- one repelling or attracting fixed point: phi o f o phi^-1 = M_s

phi is defined orbit-wise from an affine seed on a fundamental domain D_0 by
phi = A^n o phi o f^-n on D_n = f^n(D_0), with A the model map. It is built
exactly, domain by domain, outward from D_0. Once f is affine on everything
between a domain and the end the orbit runs to, later domains repeat the
slopes of that domain, so the slope scan over the built domains is a global
one.
"""

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bsgeom.config import ExperimentConfig
from bsgeom.errors import BreakpointBudgetError, MalformedCoverError, WrongClassificationError
from bsgeom.quasisim.intervals import (
    extract_stretch,
    in_every_interval,
    power_stretch_profile,
    uniform_power_bound,
)
from bsgeom.quasisim.plhomeo import PLHomeo, compose, conjugate, inverse, power, stretch_interval

logger = logging.getLogger(__name__)

INF = float("inf")
Bound = Union[Fraction, float]
Interval = Tuple[Optional[Fraction], Optional[Fraction]]


# classification


@dataclass(frozen=True)
class NonUniformityWitness:
    """A power of f and a triple whose quasisimilarity ratio exceeds the declared constant."""

    kind: str
    power: int
    triple: Optional[Tuple[Fraction, Fraction, Fraction]]
    ratio: float

    def to_json(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "power": self.power,
            "triple": None if self.triple is None else [str(v) for v in self.triple],
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class NoFixedPoint:
    direction: int
    via_square: bool = False
    case = "NoFixedPoint"

    def to_json(self) -> Dict[str, object]:
        return {"case": self.case, "direction": "+" if self.direction > 0 else "-", "viaSquare": self.via_square}


@dataclass(frozen=True)
class UniqueFixedPoint:
    point: Fraction
    kind: str
    via_square: bool = False
    case = "UniqueFixedPoint"

    def to_json(self) -> Dict[str, object]:
        return {"case": self.case, "point": str(self.point), "kind": self.kind, "viaSquare": self.via_square}


@dataclass(frozen=True)
class NotUniformQS:
    witness: NonUniformityWitness
    via_square: bool = False
    case = "NotUniformQS"

    def to_json(self) -> Dict[str, object]:
        return {"case": self.case, "witness": self.witness.to_json(), "viaSquare": self.via_square}


@dataclass(frozen=True)
class FiniteOrder:
    order: int
    via_square: bool = True
    case = "FiniteOrder"

    def to_json(self) -> Dict[str, object]:
        return {"case": self.case, "order": self.order, "viaSquare": self.via_square}


Classification = Union[NoFixedPoint, UniqueFixedPoint, NotUniformQS, FiniteOrder]


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _ratio(num: Fraction, den: Fraction) -> float:
    if den == 0:
        return INF
    r = float(abs(num) / abs(den))
    return max(r, 1.0 / r) if r > 0 else INF


def _midpoint_witness(g: PLHomeo, x: Fraction, y: Fraction, declared: float, max_power: int) -> NonUniformityWitness:
    """Fixed x < y with no fixed point between: follow z = (x + y) / 2 and compare
    d(x, g^k z) with d(g^k z, y).
    """
    z = (x + y) / 2
    zk = z
    ratio = 1.0
    for k in range(1, max_power + 1):
        zk = g(zk)
        ratio = _ratio(zk - x, y - zk)
        if ratio > declared:
            return NonUniformityWitness("two_fixed_points", k, (x, z, y), ratio)
    return NonUniformityWitness("two_fixed_points", max_power, (x, z, y), ratio)


def _escape_witness(
    g: PLHomeo, x: Fraction, y: Fraction, z: Fraction, declared: float, max_power: int
) -> NonUniformityWitness:
    """Fixed x < y and z outside [x, y] whose orbit escapes to infinity under g or g^-1;
    compare d(g^k z, x) / d(z, x) with d(y, x) / d(y, x) = 1.
    """
    h, sign = g, 1
    outward = _sign(z - y) if z > y else _sign(z - x)
    if _sign(g(z) - z) != outward:
        h, sign = inverse(g), -1
    zk = z
    ratio = 1.0
    for k in range(1, max_power + 1):
        zk = h(zk)
        ratio = _ratio(zk - x, z - x)
        if ratio > declared:
            return NonUniformityWitness("fixed_interval", sign * k, (x, y, z), ratio)
    return NonUniformityWitness("fixed_interval", sign * max_power, (x, y, z), ratio)


def _one_sided_witness(g: PLHomeo, p: Fraction, declared: float, max_power: int) -> NonUniformityWitness:
    """A fixed point p that neither attracts nor repels: compare d(p, g^k(p + 1)) with d(g^k(p - 1), p)."""
    x, y = p - 1, p + 1
    xk, yk = x, y
    ratio = 1.0
    for k in range(1, max_power + 1):
        xk, yk = g(xk), g(yk)
        ratio = _ratio(yk - p, p - xk)
        if ratio > declared:
            return NonUniformityWitness("one_sided_fixed_point", k, (x, p, y), ratio)
    return NonUniformityWitness("one_sided_fixed_point", max_power, (x, p, y), ratio)


def _profile_witness(g: PLHomeo, declared: float, max_power: int, cap: int) -> Optional[NonUniformityWitness]:
    """Square g until b/a of g^(2^k) passes declared^4, which no declared-quasisimilarity allows."""
    h, k = g, 1
    while k <= max_power:
        ratio = float(stretch_interval(h).ratio)
        if ratio > declared**4:
            return NonUniformityWitness("stretch_profile", k, None, ratio)
        try:
            h = compose(h, h, cap)
        except BreakpointBudgetError:
            logger.warning(f"Stopped the power profile check at power {k}")
            return None
        k *= 2
    return None


def classify(f: PLHomeo, radius: int = 16, config: Optional[ExperimentConfig] = None) -> Classification:
    """Dynamical type of f: no fixed point, a unique repelling or attracting
    fixed point, or a witness that the powers of f are not uniform
    quasisimilarities.

    The stretch profile check squares f up to the power radius. Triple
    witnesses run to config.witness_max_power. Both compare against
    config.declared_qs_constant.

    Raises:
        ValueError: If f is the identity
    """
    config = config or ExperimentConfig()
    if f.is_identity:
        raise ValueError("the identity has no dynamical type")
    declared = config.declared_qs_constant
    max_power = config.witness_max_power
    via_square = not f.increasing
    g = power(f, 2, config.breakpoint_cap) if via_square else f
    if g.is_identity:
        return FiniteOrder(2)

    fixed = g.fixed_points()
    if fixed.empty:
        witness = _profile_witness(g, declared, min(radius, max_power), config.breakpoint_cap)
        if witness is not None:
            return NotUniformQS(witness, via_square)
        return NoFixedPoint(_sign(g(0) - 0), via_square)

    p = fixed.unique
    if p is None:
        pieces = fixed.components()
        if len(pieces) >= 2:
            x, y = pieces[0][1], pieces[1][0]
            logger.info(f"Several fixed points; following the midpoint of ({x}, {y})")
            return NotUniformQS(_midpoint_witness(g, x, y, declared, max_power), via_square)
        lo, hi = pieces[0]
        if lo is None and hi is None:  # pragma: no cover - identity handled above
            raise ValueError("the identity has no dynamical type")
        if lo is None:
            x, y, z = hi - 1, hi, hi + 1
        elif hi is None:
            x, y, z = lo, lo + 1, lo - 1
        else:
            x, y, z = lo, hi, hi + 1
        return NotUniformQS(_escape_witness(g, x, y, z, declared, max_power), via_square)

    left = _sign(g(p - 1) - (p - 1))
    right = _sign(g(p + 1) - (p + 1))
    if left == right:
        return NotUniformQS(_one_sided_witness(g, p, declared, max_power), via_square)
    witness = _profile_witness(g, declared, min(radius, max_power), config.breakpoint_cap)
    if witness is not None:
        return NotUniformQS(witness, via_square)
    return UniqueFixedPoint(p, "repelling" if right > 0 else "attracting", via_square)


# orbit-wise conjugacy


@dataclass(frozen=True)
class Affine:
    scale: Fraction
    shift: Fraction = Fraction(0)

    def __call__(self, x: Fraction) -> Fraction:
        return self.scale * x + self.shift

    def inverse(self) -> "Affine":
        return Affine(1 / self.scale, -self.shift / self.scale)

    def to_plhomeo(self) -> PLHomeo:
        return PLHomeo.affine(self.scale, self.shift)


def _between(a: Bound, b: Bound) -> Tuple[Bound, Bound]:
    return (a, b) if a <= b else (b, a)


def _simplify(points: List[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    """Drop interior points where the slope does not change."""
    if len(points) <= 2:
        return points
    kept = [points[0]]
    for k in range(1, len(points) - 1):
        (x0, y0), (x1, y1), (x2, y2) = kept[-1], points[k], points[k + 1]
        if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
            kept.append(points[k])
    kept.append(points[-1])
    return kept


class OrbitSide:
    """The conjugacy on one invariant open interval swept by the orbit of D_0.

    starts[k] = f^k(x0), D_k lies between starts[k] and starts[k + 1], and the
    orbit runs towards forward_limit as k grows and towards backward_limit as
    k falls.
    """

    def __init__(
        self,
        f: PLHomeo,
        f_inv: PLHomeo,
        seed: Sequence[Tuple[Fraction, Fraction]],
        model: Affine,
        forward_limit: Bound,
        backward_limit: Bound,
        cap: int,
    ):
        (x0, y0), (x1, y1) = seed
        if f(x0) != x1:
            raise ValueError("seed must map a fundamental domain [x0, f(x0)]")
        self.f = f
        self.f_inv = f_inv
        self.model = model
        self.model_inv = model.inverse()
        self.forward_limit = forward_limit
        self.backward_limit = backward_limit
        self.cap = cap
        self.starts: Dict[int, Fraction] = {0: x0, 1: x1}
        self.domains: Dict[int, List[Tuple[Fraction, Fraction]]] = {0: sorted([(x0, y0), (x1, y1)])}
        self.lo_index = 0
        self.hi_index = 0
        self.point_count = 2

    # geometry

    def region(self) -> Tuple[Bound, Bound]:
        return _between(self.backward_limit, self.forward_limit)

    def contains(self, x: Fraction) -> bool:
        lo, hi = self.region()
        return lo < x < hi

    def domain_bounds(self, k: int) -> Tuple[Fraction, Fraction]:
        a, b = _between(self.starts[k], self.starts[k + 1])
        return a, b  # type: ignore[return-value]

    def _interp(self, k: int, x: Fraction) -> Fraction:
        pts = self.domains[k]
        xs = [p[0] for p in pts]
        i = bisect_right(xs, x) - 1
        i = min(max(i, 0), len(pts) - 2)
        (xa, ya), (xb, yb) = pts[i], pts[i + 1]
        return ya + (yb - ya) * (x - xa) / (xb - xa)

    def _register(self, k: int, points: Dict[Fraction, Fraction]) -> None:
        self.domains[k] = _simplify(sorted(points.items()))
        self.point_count += len(self.domains[k])
        if self.point_count > self.cap:
            raise BreakpointBudgetError(self.cap, self.point_count)

    # building

    def step_forward(self) -> None:
        k = self.hi_index
        start, end = self.starts[k + 1], self.f(self.starts[k + 1])
        lo, hi = _between(start, end)
        points = {self.f(x): self.model(y) for x, y in self.domains[k]}
        # breakpoints of f^-1 are the images of breakpoints of f
        for b in self.f.ys:
            if lo < b < hi and b not in points:
                points[b] = self.model(self._interp(k, self.f_inv(b)))
        self.starts[k + 2] = end
        self._register(k + 1, points)
        self.hi_index = k + 1

    def step_backward(self) -> None:
        k = self.lo_index
        start = self.f_inv(self.starts[k])
        lo, hi = _between(start, self.starts[k])
        points = {self.f_inv(x): self.model_inv(y) for x, y in self.domains[k]}
        for b in self.f.xs:
            if lo < b < hi and b not in points:
                points[b] = self.model_inv(self._interp(k, self.f(b)))
        self.starts[k - 1] = start
        self._register(k - 1, points)
        self.lo_index = k - 1

    def forward_stable(self) -> bool:
        """f is affine from the outermost forward domain on, with the model's scale."""
        lo, hi = _between(self.starts[self.hi_index], self.forward_limit)
        if not self.f.affine_on(lo, hi):
            return False
        return self._slope_towards(self.starts[self.hi_index], self.forward_limit) == self.model.scale

    def backward_stable(self) -> bool:
        lo, hi = _between(self.backward_limit, self.starts[self.lo_index])
        if not self.f.affine_on(lo, hi):
            return False
        return self._slope_towards(self.starts[self.lo_index], self.backward_limit) == self.model.scale

    def drift(self) -> Tuple[Fraction, Fraction]:
        """Per-domain slope factors model.scale / f' in the two stable regions."""
        fwd = self.model.scale / self._slope_towards(self.starts[self.hi_index], self.forward_limit)
        bwd = self._slope_towards(self.starts[self.lo_index], self.backward_limit) / self.model.scale
        return fwd, bwd

    def _slope_towards(self, x: Fraction, limit: Bound) -> Fraction:
        if limit == INF:
            probe = x + 1
        elif limit == -INF:
            probe = x - 1
        else:
            probe = (x + Fraction(limit)) / 2
        lo, hi = _between(x, probe)
        return self.f.slope_at((lo + hi) / 2)

    def scan(self, max_steps: int) -> bool:
        """Extend in both directions until stable; False if a side keeps changing."""
        steps = 0
        while not self.forward_stable():
            if steps >= max_steps or self._drifting_forward():
                return False
            self.step_forward()
            steps += 1
        steps = 0
        while not self.backward_stable():
            if steps >= max_steps or self._drifting_backward():
                return False
            self.step_backward()
            steps += 1
        return True

    def _drifting_forward(self) -> bool:
        lo, hi = _between(self.starts[self.hi_index], self.forward_limit)
        return self.f.affine_on(lo, hi) and self.drift()[0] != 1

    def _drifting_backward(self) -> bool:
        lo, hi = _between(self.backward_limit, self.starts[self.lo_index])
        return self.f.affine_on(lo, hi) and self.drift()[1] != 1

    def cover(self, lo: Fraction, hi: Fraction, max_steps: int) -> None:
        """Build domains until [lo, hi] (inside the region) is covered."""
        for _ in range(max_steps):
            a, b = self.built_range()
            need_low = lo < a
            need_high = hi > b
            if not (need_low or need_high):
                return
            increasing = self.starts[1] > self.starts[0]
            if (need_high and increasing) or (need_low and not increasing):
                self.step_forward()
            if (need_low and increasing) or (need_high and not increasing):
                self.step_backward()
        raise BreakpointBudgetError(max_steps, max_steps)

    def built_range(self) -> Tuple[Fraction, Fraction]:
        lo_a, lo_b = self.domain_bounds(self.lo_index)
        hi_a, hi_b = self.domain_bounds(self.hi_index)
        return min(lo_a, hi_a), max(lo_b, hi_b)

    def table(self) -> List[Tuple[Fraction, Fraction]]:
        merged: Dict[Fraction, Fraction] = {}
        for k in range(self.lo_index, self.hi_index + 1):
            merged.update(self.domains[k])
        return sorted(merged.items())

    def value(self, x: Fraction, max_steps: int) -> Fraction:
        self.cover(x, x, max_steps)
        for k in range(self.lo_index, self.hi_index + 1):
            a, b = self.domain_bounds(k)
            if a <= x <= b:
                return self._interp(k, x)
        raise AssertionError("covered point outside every domain")  # pragma: no cover

    def tail_rays(self) -> List[Tuple[Tuple[Bound, Bound], int]]:
        """The unbuilt rays at both ends, each with the domain whose slopes it repeats once stable."""
        forward = _between(self.starts[self.hi_index + 1], self.forward_limit)
        backward = _between(self.backward_limit, self.starts[self.lo_index])
        return [(forward, self.hi_index), (backward, self.lo_index)]

    def domain_slopes(self, k: int) -> List[Fraction]:
        pts = self.domains[k]
        return [(yb - ya) / (xb - xa) for (xa, ya), (xb, yb) in zip(pts, pts[1:])]


class OrbitConjugacy:
    """phi with phi o f o phi^-1 = model, assembled from orbit sides.

    Inputs are first shifted by -offset (the fixed point of f moves to 0 in
    the dilation case); a fixed point maps to fixed_value.
    """

    def __init__(
        self,
        f: PLHomeo,
        model: Affine,
        sides: List[OrbitSide],
        offset: Fraction = Fraction(0),
        fixed_value: Optional[Fraction] = None,
        max_steps: int = 1_000_000,
    ):
        self.f = f
        self.model = model
        self.sides = sides
        self.offset = offset
        self.fixed_value = fixed_value
        self.max_steps = max_steps
        self.stable: Optional[bool] = None

    def _side(self, u: Fraction) -> OrbitSide:
        for side in self.sides:
            if side.contains(u):
                return side
        raise ValueError(f"{u} lies outside every orbit side")

    def __call__(self, x: Union[int, Fraction]) -> Fraction:
        """Exact value phi(x)."""
        u = Fraction(x) - self.offset
        if self.fixed_value is not None and u == 0:
            return self.fixed_value
        return self._side(u).value(u, self.max_steps)

    def _ensure(self, xs: np.ndarray) -> None:
        us = np.asarray(xs, dtype=float) - float(self.offset)
        for side in self.sides:
            lo, hi = side.region()
            inside = us[(us > float(lo)) & (us < float(hi))]
            if inside.size:
                side.cover(Fraction(float(inside.min())), Fraction(float(inside.max())), self.max_steps)

    def table(self) -> Tuple[np.ndarray, np.ndarray]:
        """All built breakpoints (x, phi(x)) as float arrays in input coordinates."""
        points: Dict[Fraction, Fraction] = {}
        for side in self.sides:
            points.update(side.table())
        if self.fixed_value is not None:
            points[Fraction(0)] = self.fixed_value
        items = sorted(points.items())
        tx = np.array([float(x + self.offset) for x, _ in items])
        ty = np.array([float(y) for _, y in items])
        return tx, ty

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised float evaluation through the exact breakpoint table."""
        xs = np.asarray(xs, dtype=float)
        self._ensure(xs)
        tx, ty = self.table()
        return np.interp(xs, tx, ty)

    def evaluate_inverse(self, ys: np.ndarray) -> np.ndarray:
        ys = np.asarray(ys, dtype=float)
        tx, ty = self.table()
        while ys.size and (ys.min() < ty[0] or ys.max() > ty[-1]):
            for side in self.sides:
                side.step_forward()
                side.step_backward()
            tx, ty = self.table()
        return np.interp(ys, ty, tx)

    def inverse_value(self, y: Union[int, Fraction]) -> Fraction:
        """Exact phi^-1(y) by bisection over the monotone table."""
        y = Fraction(y)
        if self.fixed_value is not None and y == self.fixed_value:
            return self.offset
        for _ in range(self.max_steps):
            points = sorted(p for side in self.sides for p in side.table())
            if self.fixed_value is not None:
                points = sorted(points + [(Fraction(0), self.fixed_value)])
            ys = [p[1] for p in points]
            i = bisect_right(ys, y) - 1
            if 0 <= i < len(points) - 1:
                (xa, ya), (xb, yb) = points[i], points[i + 1]
                return xa + (xb - xa) * (y - ya) / (yb - ya) + self.offset
            for side in self.sides:
                side.step_forward()
                side.step_backward()
        raise BreakpointBudgetError(self.max_steps, self.max_steps)

    def restrict(self, lo: Union[int, Fraction], hi: Union[int, Fraction]) -> PLHomeo:
        """phi on [lo, hi] as an exact PLHomeo (tails continue the end pieces).

        The window must avoid the fixed point, where breakpoints accumulate.
        """
        lo_u, hi_u = Fraction(lo) - self.offset, Fraction(hi) - self.offset
        if self.fixed_value is not None and lo_u <= 0 <= hi_u:
            raise ValueError("restriction windows must avoid the fixed point")
        side = self._side(lo_u)
        if not side.contains(hi_u):
            raise ValueError("restriction window crosses an orbit side boundary")
        side.cover(lo_u, hi_u, self.max_steps)
        inner = [(x, y) for x, y in side.table() if lo_u < x < hi_u]
        points = [(lo_u, side.value(lo_u, self.max_steps))] + inner + [(hi_u, side.value(hi_u, self.max_steps))]
        points = _simplify(points)
        first = (points[1][1] - points[0][1]) / (points[1][0] - points[0][0])
        last = (points[-1][1] - points[-2][1]) / (points[-1][0] - points[-2][0])
        return PLHomeo.from_points([(x + self.offset, y) for x, y in points], first, last)

    def scan(self) -> bool:
        """Extend every side until its slopes repeat; False if some side drifts."""
        if self.stable is None:
            self.stable = all(side.scan(self.max_steps) for side in self.sides)
        return self.stable

    def slope_range(
        self, lo: Optional[Fraction] = None, hi: Optional[Fraction] = None
    ) -> Tuple[Fraction, Fraction]:
        """Exact min and max slope of phi over the open window (lo, hi), None = unbounded.

        Only meaningful after a stable scan; an unstable phi reports the built domains.
        """
        if not self.scan():
            logger.warning("Conjugacy slopes keep drifting; reporting built domains only")
        lo_u = -INF if lo is None else Fraction(lo) - self.offset
        hi_u = INF if hi is None else Fraction(hi) - self.offset
        slopes: List[Fraction] = []
        for side in self.sides:
            for k in range(side.lo_index, side.hi_index + 1):
                pts = side.domains[k]
                for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
                    if xa < hi_u and xb > lo_u:
                        slopes.append((yb - ya) / (xb - xa))
            for (a, b), k in side.tail_rays():
                if a < hi_u and b > lo_u:
                    slopes.extend(side.domain_slopes(k))
        if not slopes:
            raise ValueError("window meets no part of the conjugacy")
        return min(slopes), max(slopes)

    def bilipschitz_constant(self) -> Union[Fraction, float]:
        """max(b, 1/a) over all slopes of phi; inf when the slopes drift."""
        if not self.scan():
            return INF
        a, b = self.slope_range()
        return max(b, 1 / a)

    def orbit_cover(self) -> List[Interval]:
        """The fundamental domains built so far plus the rays beyond them, in input coordinates."""
        self.scan()
        pieces: List[Tuple[Bound, Bound]] = []
        for side in self.sides:
            bounds = [side.domain_bounds(k) for k in range(side.lo_index, side.hi_index + 1)]
            pieces.extend(bounds)
            lo, hi = side.region()
            first = min(b[0] for b in bounds)
            last = max(b[1] for b in bounds)
            if lo < first:
                pieces.append((lo, first))
            if last < hi:
                pieces.append((last, hi))
        pieces.sort(key=lambda p: (p[0] != -INF, p[0]))
        cover: List[Interval] = []
        for a, b in pieces:
            ca = None if a == -INF else Fraction(a) + self.offset
            cb = None if b == INF else Fraction(b) + self.offset
            cover.append((ca, cb))
        return cover

    def conjugacy_error(self, window: float, grid: int) -> float:
        """max |phi(f(x)) - model(phi(x))| over a uniform grid on [-window, window]."""
        xs = np.linspace(-window, window, grid) + float(self.offset)
        fx = self.f.evaluate(xs)
        self._ensure(np.concatenate([xs, fx]))
        lhs = self.evaluate(fx)
        rhs = float(self.model.scale) * self.evaluate(xs) + float(self.model.shift)
        return float(np.max(np.abs(lhs - rhs)))


# rubber band principle


def _check_cover(cover: Sequence[Interval]) -> None:
    if not cover:
        raise MalformedCoverError("empty cover")
    if cover[0][0] is not None or cover[-1][1] is not None:
        raise MalformedCoverError("cover must start at -inf and end at +inf")
    for (a, b), (c, _) in zip(cover, cover[1:]):
        if b is None or c is None or b != c:
            raise MalformedCoverError(f"cover pieces must share endpoints, got {b} and {c}")
    for a, b in cover:
        if a is not None and b is not None and not a < b:
            raise MalformedCoverError(f"degenerate cover piece [{a}, {b}]")


def verify_rubber_band(
    phi: Union[PLHomeo, OrbitConjugacy], cover: Sequence[Interval], k: Union[int, float, Fraction]
) -> bool:
    """True iff phi is K-bilipschitz on every piece of a cover tiling R.

    Raises:
        MalformedCoverError: If the cover does not tile R with shared endpoints
        ValueError: If K is not a finite constant >= 1
    """
    _check_cover(cover)
    if isinstance(k, float) and not math.isfinite(k):
        raise ValueError("the bilipschitz constant must be finite")
    k = Fraction(k)
    if k < 1:
        raise ValueError(f"a bilipschitz constant is at least 1, got {k}")
    if isinstance(phi, OrbitConjugacy) and not phi.scan():
        return False
    for lo, hi in cover:
        a, b = phi.slope_range(lo, hi)
        if a < 1 / k or b > k:
            logger.info(f"Piece [{lo}, {hi}] has slopes [{a}, {b}] outside [1/{k}, {k}]")
            return False
    return True


# results


@dataclass
class ConjugacyResult:
    """phi, the model map and the certificates of a conjugacy run."""

    case: str
    phi: OrbitConjugacy
    model: Affine
    value: Fraction
    bilip_measured: Fraction
    certificate: Fraction
    sup_error: float
    rubber_band: bool
    classification: Classification
    extras: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> Dict[str, object]:
        return {
            "case": self.case,
            "s_or_alpha": float(self.value),
            "exact": str(self.value),
            "bilipK": float(self.bilip_measured),
            "certificate": float(self.certificate),
            "supError": self.sup_error,
            "rubberBand": self.rubber_band,
            "classification": self.classification.to_json(),
            **self.extras,
        }


def conjugate_to_translation(
    f: PLHomeo, x0: Union[int, Fraction] = 0, radius: int = 16, config: Optional[ExperimentConfig] = None
) -> ConjugacyResult:
    """A bilipschitz phi with phi o f o phi^-1 = x + alpha, alpha = f(x0) - x0.

    phi is the translation x - x0 on the seed domain between x0 and f(x0).

    Raises:
        WrongClassificationError: Unless f has no fixed point
    """
    config = config or ExperimentConfig()
    kind = classify(f, radius, config)
    if not isinstance(kind, NoFixedPoint) or kind.via_square:
        raise WrongClassificationError(f"translation conjugacy needs a fixed point free map, got {kind.case}")
    x0 = Fraction(x0)
    x1 = f(x0)
    alpha = x1 - x0
    model = Affine(Fraction(1), alpha)
    forward = INF if alpha > 0 else -INF
    side = OrbitSide(f, inverse(f), [(x0, Fraction(0)), (x1, alpha)], model, forward, -forward, config.breakpoint_cap)
    phi = OrbitConjugacy(f, model, [side], max_steps=config.breakpoint_cap)
    certificate = uniform_power_bound(f, radius, config.breakpoint_cap)
    measured = phi.bilipschitz_constant()
    rubber = verify_rubber_band(phi, phi.orbit_cover(), certificate)
    error = phi.conjugacy_error(config.conjugacy_window, config.conjugacy_grid)
    logger.info(f"Translation conjugacy alpha={alpha} bilip={float(measured):.6g} error={error:.3g}")
    return ConjugacyResult(
        "translation", phi, model, alpha, measured, certificate, error, rubber, kind,
        {"withinCertificate": measured <= certificate},
    )


def conjugate_to_dilation(
    f: PLHomeo, radius: int = 32, config: Optional[ExperimentConfig] = None
) -> ConjugacyResult:
    """A bilipschitz phi with phi o f o phi^-1 = M_s.

    The fixed point p is moved to 0, an attracting f is handled through f^-1,
    s comes from the nested stretch intervals (snapped to the exact tail slope
    when that slope lies in all of them), and phi maps [1, f(1)] affinely onto
    [1, s] and [f(-1), -1] onto [-s, -1].

    Raises:
        WrongClassificationError: Unless f has a unique repelling or attracting fixed point
    """
    config = config or ExperimentConfig()
    kind = classify(f, radius, config)
    if not isinstance(kind, UniqueFixedPoint) or kind.via_square:
        raise WrongClassificationError(f"dilation conjugacy needs a unique fixed point, got {kind.case}")
    p = kind.point
    g = f if kind.kind == "repelling" else inverse(f)
    g0 = conjugate(PLHomeo.translation(-p), g)
    profile = power_stretch_profile(g0, radius, config.breakpoint_cap)
    estimate = extract_stretch(profile, radius)
    candidate = g0.slope_hi
    if in_every_interval(profile, candidate, radius):
        s = candidate
    else:
        s = Fraction(estimate.s).limit_denominator(10**12)
        logger.warning(f"Tail slope {candidate} is not in every stretch interval, using s={float(s)}")
    k = profile.constant
    x1, xm = g0(1), g0(-1)
    positive = OrbitSide(g0, inverse(g0), [(Fraction(1), Fraction(1)), (x1, s)], Affine(s), INF, Fraction(0),
                         config.breakpoint_cap)
    negative = OrbitSide(g0, inverse(g0), [(Fraction(-1), Fraction(-1)), (xm, -s)], Affine(s), -INF, Fraction(0),
                         config.breakpoint_cap)
    s_f = s if kind.kind == "repelling" else 1 / s
    model = Affine(s_f)
    phi = OrbitConjugacy(f, model, [positive, negative], offset=p, fixed_value=Fraction(0),
                         max_steps=config.breakpoint_cap)
    seed_slope = (s - 1) / (x1 - 1)
    measured = phi.bilipschitz_constant()
    certificate = k**3
    rubber = verify_rubber_band(phi, phi.orbit_cover(), certificate)
    error = phi.conjugacy_error(config.conjugacy_window, config.conjugacy_grid)
    lo, hi = phi.slope_range()
    logger.info(f"Dilation conjugacy s={float(s_f):.12g} bilip={float(measured):.6g} error={error:.3g}")
    return ConjugacyResult(
        "dilation", phi, model, s_f, measured, certificate, error, rubber, kind,
        {
            "estimate": estimate.to_json(),
            "quasihomConstant": float(k),
            "seedSlope": float(seed_slope),
            "seedSlopeInBounds": 1 / k**2 <= seed_slope <= k**2,
            "slopeRange": [float(lo), float(hi)],
            "withinCertificate": 1 / certificate <= lo and hi <= certificate,
            "fixedPoint": str(p),
        },
    )


def conjugate_auto(f: PLHomeo, radius: int = 32, config: Optional[ExperimentConfig] = None) -> ConjugacyResult:
    """Dispatch on the classification of f."""
    config = config or ExperimentConfig()
    kind = classify(f, radius, config)
    if isinstance(kind, NoFixedPoint) and not kind.via_square:
        return conjugate_to_translation(f, 0, radius, config)
    if isinstance(kind, UniqueFixedPoint) and not kind.via_square:
        return conjugate_to_dilation(f, radius, config)
    raise WrongClassificationError(f"no affine model for a map classified as {kind.case}")
