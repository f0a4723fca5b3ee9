"""
Stretch Profiles

This module provides the interval side of quasisimilarity analysis: the
quasisimilarity constant of a PL map, triple-ratio sampling, uniform
quasihomomorphisms m -> [a_m, b_m] built from the powers of a map, and the
nested-interval extraction of the expansion factor s with s^m in [a_m, b_m].
"""

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from bsgeom.errors import BreakpointBudgetError, QuasiHomAxiomError
from bsgeom.quasisim.plhomeo import PLHomeo, StretchInterval, compose, stretch_interval

logger = logging.getLogger(__name__)


def qs_constant_from_interval(f: PLHomeo) -> Fraction:
    """b/a, a certified quasisimilarity constant for f.

    Conversely a K-quasisimilarity always has b/a <= K^4, which
    stretch_ratio_bound_holds checks for a measured K.
    """
    return stretch_interval(f).ratio


def stretch_ratio_bound_holds(f: PLHomeo, k: float) -> bool:
    return float(stretch_interval(f).ratio) <= k**4 * (1 + 1e-12)


def sample_triple_ratios(
    f: PLHomeo, rng: random.Random, samples: int = 2000, spread: float = 10.0
) -> Tuple[float, float]:
    """Smallest and largest sampled value of
    (|f(z) - f(x)| / |z - x|) / (|f(y) - f(x)| / |y - x|).

    Half of the base points x are breakpoints, so the ratio b/a of a map whose
    steepest and flattest pieces meet is attained.
    """
    lo_ratio, hi_ratio = math.inf, 0.0
    anchors = [float(x) for x in f.xs]
    for _ in range(samples):
        if rng.random() < 0.5:
            x = rng.choice(anchors)
        else:
            x = rng.uniform(-spread, spread)
        scale = 10 ** rng.uniform(-3, 1)
        y = x + rng.choice((-1, 1)) * scale * rng.random()
        z = x + rng.choice((-1, 1)) * scale * rng.random()
        if y == x or z == x:
            continue
        fx, fy, fz = (float(f(Fraction(v))) for v in (x, y, z))
        ratio = (abs(fz - fx) / abs(z - x)) / (abs(fy - fx) / abs(y - x))
        lo_ratio = min(lo_ratio, ratio)
        hi_ratio = max(hi_ratio, ratio)
    return lo_ratio, hi_ratio


@dataclass
class QuasiHom:
    """m -> [a_m, b_m] over -M..M, with a flag for intervals that are only
    outer bounds from the product axiom.
    """

    intervals: Dict[int, StretchInterval]
    exact: Dict[int, bool] = field(default_factory=dict)

    @property
    def radius(self) -> int:
        return max(self.intervals)

    @property
    def constant(self) -> Fraction:
        """K = max b_m / a_m."""
        return max(iv.ratio for iv in self.intervals.values())

    def __getitem__(self, m: int) -> StretchInterval:
        return self.intervals[m]

    def check_axioms(self) -> List[str]:
        """Violations of the uniform quasihomomorphism axioms within range."""
        violations = []
        identity = self.intervals.get(0)
        if identity is None or identity.a != 1 or identity.b != 1:
            violations.append("interval at 0 is not [1, 1]")
        for m, iv in self.intervals.items():
            partner = self.intervals.get(-m)
            if partner is not None and partner != iv.inverse():
                violations.append(f"interval at {-m} is not the inverse of the one at {m}")
        keys = sorted(self.intervals)
        for g in keys:
            for h in keys:
                if g + h not in self.intervals:
                    continue
                if not all(self.exact.get(m, True) for m in (g, h, g + h)):
                    continue
                bound = self.intervals[g] * self.intervals[h]
                if not bound.contains_interval(self.intervals[g + h]):
                    violations.append(f"[a,b]({g}+{h}) not inside [a,b]({g})*[a,b]({h})")
        return violations

    def to_json(self) -> Dict[str, object]:
        return {
            "constant": float(self.constant),
            "intervals": {str(m): iv.to_json() for m, iv in sorted(self.intervals.items())},
            "exact": {str(m): flag for m, flag in sorted(self.exact.items())},
        }


def power_stretch_profile(f: PLHomeo, radius: int, cap: int = 1_000_000) -> QuasiHom:
    """Exact stretch intervals of f^m for |m| <= radius.

    Powers whose breakpoint count would pass cap fall back to the tightest
    product bound [a_j a_(m-j), b_j b_(m-j)] over the splits already known.
    """
    intervals: Dict[int, StretchInterval] = {0: StretchInterval(Fraction(1), Fraction(1))}
    exact: Dict[int, bool] = {0: True}
    current: Optional[PLHomeo] = PLHomeo.identity()
    for m in range(1, radius + 1):
        if current is not None:
            try:
                current = compose(current, f, cap)
                intervals[m] = stretch_interval(current)
                exact[m] = True
                continue
            except BreakpointBudgetError as e:
                if m == 1:
                    raise
                logger.warning(f"Power {m} exceeds the breakpoint cap, using interval products: {str(e)}")
                current = None
        lo = max(intervals[j].a * intervals[m - j].a for j in range(1, m))
        hi = min(intervals[j].b * intervals[m - j].b for j in range(1, m))
        intervals[m] = StretchInterval(lo, hi)
        exact[m] = False
    for m in range(1, radius + 1):
        intervals[-m] = intervals[m].inverse()
        exact[-m] = exact[m]
    return QuasiHom(intervals, exact)


def integer_root(x: int, m: int) -> Optional[int]:
    """Exact integer m-th root of x >= 0, if there is one."""
    if x < 2:
        return x
    lo, hi = 1, 1 << (x.bit_length() // m + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**m
        if p == x:
            return mid
        if p < x:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def _log(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def exact_root(q: Fraction, m: int) -> Optional[Fraction]:
    num, den = integer_root(q.numerator, m), integer_root(q.denominator, m)
    if num is None or den is None:
        return None
    return Fraction(num, den)


@dataclass(frozen=True)
class StretchEstimate:
    """The expansion factor read off the interval I_M = [a_M^(1/M), b_M^(1/M)]."""

    s: float
    rel_error: float
    window: Tuple[float, float]
    s_exact: Optional[Fraction] = None
    nested_pairs: int = 0

    def to_json(self) -> Dict[str, object]:
        return {
            "s": self.s,
            "relError": self.rel_error,
            "window": list(self.window),
            "exact": None if self.s_exact is None else str(self.s_exact),
            "nestedPairs": self.nested_pairs,
        }


def nested_interval_pairs(profile: QuasiHom, radius: int) -> int:
    """Check I_(mn) inside I_n for every n, m with mn <= radius, exactly.

    I_(mn) inside I_n is a_(mn) >= a_n^m and b_(mn) <= b_n^m.

    Raises:
        QuasiHomAxiomError: On the first pair that is not nested
    """
    checked = 0
    for n in range(1, radius + 1):
        for m in range(2, radius // n + 1):
            big, small = profile[m * n], profile[n]
            if big.a < small.a**m or big.b > small.b**m:
                raise QuasiHomAxiomError(f"I_{m * n} is not nested in I_{n}", [(m, n)])
            checked += 1
    return checked


def extract_stretch(profile: QuasiHom, radius: Optional[int] = None) -> StretchEstimate:
    """The unique s with s^m in [a_m, b_m], to within K^(1/(2M)) - 1 relative error.

    Raises:
        QuasiHomAxiomError: If the profile violates an axiom or nesting fails
    """
    radius = radius or profile.radius
    violations = profile.check_axioms()
    if violations:
        raise QuasiHomAxiomError(f"profile is not a uniform quasihomomorphism: {violations[0]}", violations)
    pairs = nested_interval_pairs(profile, radius)
    interval = profile[radius]
    lo = math.exp(_log(interval.a) / radius)
    hi = math.exp(_log(interval.b) / radius)
    s_exact = exact_root(interval.a, radius) if interval.a == interval.b else None
    s = float(s_exact) if s_exact is not None else math.sqrt(lo * hi)
    rel_error = math.exp(_log(profile.constant) / (2 * radius)) - 1.0
    return StretchEstimate(s, rel_error, (lo, hi), s_exact, pairs)


def in_every_interval(profile: QuasiHom, candidate: Fraction, radius: Optional[int] = None) -> bool:
    """True when candidate^m lies in [a_m, b_m] for 1 <= m <= radius."""
    radius = radius or profile.radius
    value = Fraction(1)
    for m in range(1, radius + 1):
        value *= candidate
        if not profile[m].contains(value):
            return False
    return True


def inverse_profile(profile: QuasiHom) -> QuasiHom:
    """The profile of f^-1, m -> [a_-m, b_-m]."""
    return QuasiHom({-m: iv for m, iv in profile.intervals.items()}, {-m: e for m, e in profile.exact.items()})


def uniform_power_bound(f: PLHomeo, radius: int, cap: int = 1_000_000) -> Fraction:
    """max over |m| <= radius of the bilipschitz constant max(b_m, 1/a_m) of f^m."""
    profile = power_stretch_profile(f, radius, cap)
    return max(max(iv.b, 1 / iv.a) for iv in profile.intervals.values())
