"""
Piecewise-Linear Homeomorphisms

This module provides PLHomeo, a homeomorphism of R that is affine on finitely
many pieces and on its two tails, with exact rational breakpoints. Composition,
inversion, powers, stretch intervals and fixed points are all exact; a
vectorised float evaluation is provided for grid checks.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bsgeom.errors import BreakpointBudgetError, ParseError

logger = logging.getLogger(__name__)

Number = Union[int, float, str, Fraction]

SCHEMA = "plhomeo.v1"


def as_fraction(value: Number) -> Fraction:
    """Exact conversion; floats go through their shortest decimal form."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class StretchInterval:
    """The smallest [a, b] for which a map is [a, b]-bilipschitz."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.a <= self.b:
            raise ValueError(f"stretch interval needs 0 < a <= b, got [{self.a}, {self.b}]")

    def __mul__(self, other: "StretchInterval") -> "StretchInterval":
        return StretchInterval(self.a * other.a, self.b * other.b)

    def __pow__(self, m: int) -> "StretchInterval":
        if m < 0:
            return self.inverse() ** (-m)
        return StretchInterval(self.a**m, self.b**m)

    def inverse(self) -> "StretchInterval":
        return StretchInterval(1 / self.b, 1 / self.a)

    def contains(self, x: Fraction) -> bool:
        return self.a <= x <= self.b

    def contains_interval(self, other: "StretchInterval") -> bool:
        return self.a <= other.a and other.b <= self.b

    @property
    def ratio(self) -> Fraction:
        return self.b / self.a

    def to_json(self) -> Dict[str, Any]:
        return {"a": _fmt(self.a), "b": _fmt(self.b), "ratio": float(self.ratio)}


@dataclass(frozen=True)
class PLHomeo:
    """A piecewise-linear homeomorphism of R with affine tails.

    xs are the breakpoints in increasing order and ys their images. Left of
    xs[0] the map has slope slope_lo, right of xs[-1] slope slope_hi.
    Instances from the constructors are canonical: adjacent pieces always
    have different slopes, and a globally affine map keeps the single
    breakpoint 0.
    """

    xs: Tuple[Fraction, ...]
    ys: Tuple[Fraction, ...]
    slope_lo: Fraction
    slope_hi: Fraction

    def __post_init__(self) -> None:
        if not self.xs or len(self.xs) != len(self.ys):
            raise ValueError("a PL homeomorphism needs matching, non-empty breakpoint lists")
        for left, right in zip(self.xs, self.xs[1:]):
            if not left < right:
                raise ValueError("breakpoints must be strictly increasing")
        slopes = self.slopes
        if any(m == 0 for m in slopes):
            raise ValueError("zero slope: not a homeomorphism")
        if not (all(m > 0 for m in slopes) or all(m < 0 for m in slopes)):
            raise ValueError("slopes change sign: not a homeomorphism")

    # construction

    @classmethod
    def from_points(
        cls,
        points: Sequence[Tuple[Number, Number]],
        slope_lo: Number,
        slope_hi: Number,
    ) -> "PLHomeo":
        xs = [as_fraction(x) for x, _ in points]
        ys = [as_fraction(y) for _, y in points]
        return _canonical(xs, ys, as_fraction(slope_lo), as_fraction(slope_hi))

    @classmethod
    def from_slopes(cls, xs: Sequence[Number], slopes: Sequence[Number], y0: Number = 0) -> "PLHomeo":
        """Build from breakpoints, the len(xs) + 1 slopes (tails included) and f(xs[0])."""
        bx = [as_fraction(x) for x in xs]
        ms = [as_fraction(m) for m in slopes]
        if len(ms) != len(bx) + 1:
            raise ValueError("need one slope per piece, tails included")
        ys = [as_fraction(y0)]
        for i in range(1, len(bx)):
            ys.append(ys[-1] + ms[i] * (bx[i] - bx[i - 1]))
        return _canonical(bx, ys, ms[0], ms[-1])

    @classmethod
    def affine(cls, scale: Number, shift: Number = 0) -> "PLHomeo":
        """x -> scale * x + shift."""
        m = as_fraction(scale)
        return cls((Fraction(0),), (as_fraction(shift),), m, m)

    @classmethod
    def translation(cls, t: Number) -> "PLHomeo":
        return cls.affine(1, t)

    @classmethod
    def dilation(cls, s: Number) -> "PLHomeo":
        return cls.affine(s, 0)

    @classmethod
    def identity(cls) -> "PLHomeo":
        return cls.affine(1, 0)

    # structure

    @property
    def interior_slopes(self) -> Tuple[Fraction, ...]:
        return tuple(
            (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]) for i in range(len(self.xs) - 1)
        )

    @property
    def slopes(self) -> Tuple[Fraction, ...]:
        """All slopes from the left tail to the right tail."""
        return (self.slope_lo,) + self.interior_slopes + (self.slope_hi,)

    @property
    def increasing(self) -> bool:
        return self.slope_lo > 0

    @property
    def is_affine(self) -> bool:
        return len(self.xs) == 1 and self.slope_lo == self.slope_hi

    @property
    def is_identity(self) -> bool:
        return self.is_affine and self.slope_lo == 1 and self.ys[0] == self.xs[0]

    @property
    def breakpoint_count(self) -> int:
        return 0 if self.is_affine else len(self.xs)

    def affine_on(self, lo: Union[Fraction, float], hi: Union[Fraction, float]) -> bool:
        """True when no breakpoint lies strictly inside (lo, hi); bounds may be infinite."""
        if self.is_affine:
            return True
        return not any(lo < x < hi for x in self.xs)

    # evaluation

    def __call__(self, x: Number) -> Fraction:
        x = as_fraction(x)
        i = bisect_right(self.xs, x) - 1
        if i < 0:
            return self.ys[0] + self.slope_lo * (x - self.xs[0])
        if i == len(self.xs) - 1:
            return self.ys[i] + self.slope_hi * (x - self.xs[i])
        m = (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
        return self.ys[i] + m * (x - self.xs[i])

    def slope_at(self, x: Number) -> Fraction:
        """Slope of the piece containing x, taking the right-hand piece at a breakpoint."""
        return self.slopes[bisect_right(self.xs, as_fraction(x))]

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """Float evaluation on an array, each value taken as an offset from its
        piece's left breakpoint.
        """
        x = np.asarray(x, dtype=float)
        bx = np.array([float(v) for v in self.xs])
        by = np.array([float(v) for v in self.ys])
        ms = np.array([float(m) for m in self.slopes])
        idx = np.searchsorted(bx, x, side="right") - 1
        anchor = np.clip(idx, 0, len(bx) - 1)
        return by[anchor] + ms[idx + 1] * (x - bx[anchor])

    def slope_range(
        self, lo: Optional[Number] = None, hi: Optional[Number] = None
    ) -> Tuple[Fraction, Fraction]:
        """min and max |slope| over the pieces meeting the open window (lo, hi)."""
        lo_f = -float("inf") if lo is None else as_fraction(lo)
        hi_f = float("inf") if hi is None else as_fraction(hi)
        bounds = [-float("inf")] + list(self.xs) + [float("inf")]
        chosen = [
            abs(m) for m, left, right in zip(self.slopes, bounds, bounds[1:]) if left < hi_f and right > lo_f
        ]
        return min(chosen), max(chosen)

    # fixed points

    def fixed_points(self) -> "FixedPointSet":
        """Exact fixed point set, solved piece by piece."""
        bounds: List[Optional[Fraction]] = [None] + list(self.xs) + [None]
        anchors = [(self.xs[0], self.ys[0])] + list(zip(self.xs, self.ys))
        points: List[Fraction] = []
        intervals: List[Tuple[Optional[Fraction], Optional[Fraction]]] = []
        for m, (xa, ya), left, right in zip(self.slopes, anchors, bounds, bounds[1:]):
            if m == 1:
                if ya == xa:
                    intervals.append((left, right))
                continue
            x = (ya - m * xa) / (1 - m)
            if (left is None or x >= left) and (right is None or x <= right):
                points.append(x)
        intervals = _merge_intervals(intervals)
        isolated = sorted(
            {p for p in points if not any(_inside(p, iv) for iv in intervals)}
        )
        return FixedPointSet(tuple(isolated), tuple(intervals))

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "breakpoints": [[_fmt(x), _fmt(y)] for x, y in zip(self.xs, self.ys)],
            "slopes": [_fmt(m) for m in self.interior_slopes],
            "tails": {"lo": _fmt(self.slope_lo), "hi": _fmt(self.slope_hi)},
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "PLHomeo":
        """Load the plhomeo.v1 document; interior slopes, when given, must match.

        Raises:
            ParseError: If a required field is missing or not a rational
        """
        if not isinstance(data, dict):
            raise ParseError(f"a plhomeo.v1 document is an object, got {type(data).__name__}")
        schema = data.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise ParseError(f"unsupported PL homeomorphism schema {schema!r}")
        try:
            points = [(as_fraction(x), as_fraction(y)) for x, y in data["breakpoints"]]
            tails = {side: as_fraction(data["tails"][side]) for side in ("lo", "hi")}
        except KeyError as e:
            raise ParseError(f"plhomeo.v1 document is missing {e}") from e
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ParseError(f"malformed plhomeo.v1 document: {e}") from e
        if points:
            given = data.get("slopes")
            if given is not None:
                derived = [
                    (y2 - y1) / (x2 - x1) for (x1, y1), (x2, y2) in zip(points, points[1:])
                ]
                if len(given) != len(derived):
                    raise ValueError("slopes list does not match the breakpoints")
                for m_given, m_derived in zip(given, derived):
                    m_given = as_fraction(m_given)
                    if abs(m_given - m_derived) > abs(m_derived) * Fraction(1, 10**12):
                        raise ValueError(f"slope {m_given} disagrees with breakpoints ({m_derived})")
            return cls.from_points(points, tails["lo"], tails["hi"])
        return cls.affine(tails["lo"], data.get("intercept", 0))

    def __str__(self) -> str:
        pieces = ", ".join(f"({_fmt(x)}, {_fmt(y)})" for x, y in zip(self.xs, self.ys))
        return f"PL[{_fmt(self.slope_lo)} | {pieces} | {_fmt(self.slope_hi)}]"


def _inside(p: Fraction, interval: Tuple[Optional[Fraction], Optional[Fraction]]) -> bool:
    lo, hi = interval
    return (lo is None or p >= lo) and (hi is None or p <= hi)


def _merge_intervals(
    intervals: List[Tuple[Optional[Fraction], Optional[Fraction]]]
) -> List[Tuple[Optional[Fraction], Optional[Fraction]]]:
    merged: List[Tuple[Optional[Fraction], Optional[Fraction]]] = []
    for lo, hi in intervals:
        if merged and merged[-1][1] is not None and lo is not None and merged[-1][1] >= lo:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


@dataclass(frozen=True)
class FixedPointSet:
    """Isolated fixed points and maximal fixed intervals (None = infinite end)."""

    points: Tuple[Fraction, ...]
    intervals: Tuple[Tuple[Optional[Fraction], Optional[Fraction]], ...]

    @property
    def empty(self) -> bool:
        return not self.points and not self.intervals

    @property
    def unique(self) -> Optional[Fraction]:
        if len(self.points) == 1 and not self.intervals:
            return self.points[0]
        return None

    def components(self) -> List[Tuple[Optional[Fraction], Optional[Fraction]]]:
        """Sorted pieces of the fixed set, points as degenerate intervals."""
        pieces = [(p, p) for p in self.points] + list(self.intervals)

        def key(iv: Tuple[Optional[Fraction], Optional[Fraction]]) -> Tuple[int, Fraction]:
            lo = iv[0]
            return (0, Fraction(0)) if lo is None else (1, lo)

        return sorted(pieces, key=key)


def _canonical(xs: List[Fraction], ys: List[Fraction], slope_lo: Fraction, slope_hi: Fraction) -> PLHomeo:
    pairs = sorted(zip(xs, ys))
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]
    slopes = [slope_lo] + [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)] + [slope_hi]
    keep_x, keep_y = [], []
    for i, (x, y) in enumerate(zip(xs, ys)):
        if slopes[i] != slopes[i + 1]:
            keep_x.append(x)
            keep_y.append(y)
    if not keep_x:
        # globally affine: anchor at 0
        y0 = ys[0] + slope_lo * (0 - xs[0])
        return PLHomeo((Fraction(0),), (y0,), slope_lo, slope_hi)
    return PLHomeo(tuple(keep_x), tuple(keep_y), slope_lo, slope_hi)


def inverse(f: PLHomeo) -> PLHomeo:
    """The inverse homeomorphism."""
    points = sorted(zip(f.ys, f.xs))
    if f.increasing:
        return _canonical([p[0] for p in points], [p[1] for p in points], 1 / f.slope_lo, 1 / f.slope_hi)
    return _canonical([p[0] for p in points], [p[1] for p in points], 1 / f.slope_hi, 1 / f.slope_lo)


def compose(f: PLHomeo, g: PLHomeo, cap: Optional[int] = None) -> PLHomeo:
    """f o g.

    Raises:
        BreakpointBudgetError: If the result would carry more than cap breakpoints
    """
    g_inv = inverse(g)
    candidates = set(g.xs) | {g_inv(b) for b in f.xs}
    if cap is not None and len(candidates) > cap:
        raise BreakpointBudgetError(cap, len(candidates))
    bx = sorted(candidates)
    by = [f(g(x)) for x in bx]
    slope_lo = by[0] - f(g(bx[0] - 1))
    slope_hi = f(g(bx[-1] + 1)) - by[-1]
    return _canonical(bx, by, slope_lo, slope_hi)


def power(f: PLHomeo, m: int, cap: Optional[int] = None) -> PLHomeo:
    """f^m by repeated squaring; negative m uses the inverse."""
    base = f if m >= 0 else inverse(f)
    m = abs(m)
    result = PLHomeo.identity()
    while m:
        if m & 1:
            result = compose(result, base, cap)
        m >>= 1
        if m:
            base = compose(base, base, cap)
    return result


def stretch_interval(f: PLHomeo) -> StretchInterval:
    """[min |slope|, max |slope|] over all pieces, tails included."""
    lo, hi = f.slope_range()
    return StretchInterval(lo, hi)


def conjugate(psi: PLHomeo, f: PLHomeo) -> PLHomeo:
    """psi o f o psi^-1."""
    return compose(compose(psi, f), inverse(psi))
