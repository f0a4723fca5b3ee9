"""
Boundary Dynamics

This module provides the biconvergence side of BS(1,n): the mixed triple
spaces T(R,R,Q_n) and T(R,Q_n,Q_n) with their diagonal actions, exact
proper-discontinuity censuses over word balls (with the T(R,R,R) control),
the cocompactness normaliser, contraction elements for pairs of clones and
source-sink probes for sequences of elements.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bsgeom.bsgroup import (
    AffElem,
    GroupWord,
    act_Qn,
    act_R,
    act_tree,
    inv,
    normal_form_word,
    spheres,
    stretch_Qn,
    stretch_R,
)
from bsgeom.errors import BaseMismatchError, EqualPointsError
from bsgeom.nadic import (
    Clone,
    CloneRelation,
    NAdic,
    clone_containing,
    clone_relation,
    nadic_dist,
)

logger = logging.getLogger(__name__)

Real = Union[int, Fraction]


# triple spaces


@dataclass(frozen=True)
class TripleRRQ:
    """A point (x, y, zeta) of T(R, R, Q_n), x != y."""

    x: Fraction
    y: Fraction
    zeta: NAdic

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.x == self.y:
            raise EqualPointsError("a point of T(R,R,Q_n) needs x != y")

    @property
    def n(self) -> int:
        return self.zeta.n

    def to_json(self) -> Dict[str, str]:
        return {"x": str(self.x), "y": str(self.y), "zeta": self.zeta.to_string()}


@dataclass(frozen=True)
class TripleRQQ:
    """A point (x, eta, zeta) of T(R, Q_n, Q_n), eta != zeta."""

    x: Fraction
    eta: NAdic
    zeta: NAdic

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        if self.eta.n != self.zeta.n:
            raise BaseMismatchError(self.eta.n, self.zeta.n)
        if self.eta == self.zeta:
            raise EqualPointsError("a point of T(R,Q_n,Q_n) needs eta != zeta")

    @property
    def n(self) -> int:
        return self.zeta.n

    def to_json(self) -> Dict[str, str]:
        return {"x": str(self.x), "eta": self.eta.to_string(), "zeta": self.zeta.to_string()}


Triple = Union[TripleRRQ, TripleRQQ]


def act_triple(g: AffElem, t: Triple) -> Triple:
    """The diagonal action, componentwise on R and Q_n."""
    if g.n != t.n:
        raise BaseMismatchError(g.n, t.n)
    if isinstance(t, TripleRRQ):
        return TripleRRQ(act_R(g, t.x), act_R(g, t.y), act_Qn(g, t.zeta))
    return TripleRQQ(act_R(g, t.x), act_Qn(g, t.eta), act_Qn(g, t.zeta))


# compact blocks


@dataclass(frozen=True)
class RealInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def image(self, g: AffElem) -> "RealInterval":
        return RealInterval(act_R(g, self.lo), act_R(g, self.hi))

    def meets(self, other: "RealInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    @property
    def center(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_json(self) -> List[str]:
        return [str(self.lo), str(self.hi)]


@dataclass(frozen=True)
class CompactBlock:
    """A product of closed intervals and clones, a compact test set in a triple space.

    Two intervals and one clone sit in T(R,R,Q_n), one interval and two clones
    in T(R,Q_n,Q_n), and three intervals give the T(R,R,R) control. Repeated
    factors must be disjoint so the block avoids the diagonal.
    """

    reals: Tuple[RealInterval, ...]
    clones: Tuple[Clone, ...] = ()
    n: int = 2

    def __post_init__(self) -> None:
        if self.kind not in ("RRQ", "RQQ", "RRR"):
            raise ValueError(f"unsupported block shape {self.kind}")
        for c in self.clones:
            if c.n != self.n:
                raise BaseMismatchError(self.n, c.n)
        for i, u in enumerate(self.reals):
            for v in self.reals[i + 1 :]:
                if u.meets(v):
                    raise ValueError("block intervals must be disjoint")
        if len(self.clones) == 2 and clone_relation(*self.clones) != CloneRelation.DISJOINT:
            raise ValueError("block clones must be disjoint")

    @property
    def kind(self) -> str:
        return "R" * len(self.reals) + "Q" * len(self.clones)

    @property
    def clone_radius(self) -> Optional[Fraction]:
        return max((c.radius for c in self.clones), default=None)

    def image(self, g: AffElem) -> "CompactBlock":
        return CompactBlock(
            tuple(r.image(g) for r in self.reals), tuple(act_tree(g, c) for c in self.clones), self.n
        )

    def meets(self, other: "CompactBlock") -> bool:
        """Exact componentwise intersection test."""
        if not all(u.meets(v) for u, v in zip(self.reals, other.reals)):
            return False
        return all(clone_relation(c, d) != CloneRelation.DISJOINT for c, d in zip(self.clones, other.clones))

    def contains(self, t: Triple) -> bool:
        if isinstance(t, TripleRRQ):
            if self.kind != "RRQ":
                return False
            return self.reals[0].contains(t.x) and self.reals[1].contains(t.y) and self.clones[0].contains(t.zeta)
        if self.kind != "RQQ":
            return False
        return self.reals[0].contains(t.x) and self.clones[0].contains(t.eta) and self.clones[1].contains(t.zeta)

    @classmethod
    def parse(cls, text: str, n: int) -> "CompactBlock":
        """Read a block written as factors joined by 'x', e.g. "[0,1]x[2,3]xZ".

        Interval factors are "[lo,hi]"; clone factors are "Z" for Z_n or a
        clone label "k:low:digits" (digits as single base-36 characters).
        """
        reals: List[RealInterval] = []
        clones: List[Clone] = []
        for factor in text.replace(" ", "").split("x"):
            if factor.startswith("["):
                lo, hi = factor.strip("[]").split(",")
                reals.append(RealInterval(Fraction(lo), Fraction(hi)))
            else:
                clones.append(Clone.parse(factor, n))
        return cls(tuple(reals), tuple(clones), n)

    def to_json(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "n": self.n,
            "reals": [r.to_json() for r in self.reals],
            "clones": [str(c) for c in self.clones],
        }


def standard_block(n: int) -> CompactBlock:
    """[0,1] x [2,3] x Z_n in T(R,R,Q_n)."""
    return CompactBlock((RealInterval(0, 1), RealInterval(2, 3)), (Clone.integers(n),), n)


def control_block(n: int) -> CompactBlock:
    """[0,1] x [2,3] x [4,5] in T(R,R,R)."""
    return CompactBlock((RealInterval(0, 1), RealInterval(2, 3), RealInterval(4, 5)), (), n)


# censuses


@dataclass
class Census:
    """Counts of {g in ball(L) : gA meets A} for L = 0..radius."""

    block: CompactBlock
    counts: List[int]
    elements: List[AffElem]

    @property
    def radius(self) -> int:
        return len(self.counts) - 1

    def stable_from(self) -> Optional[int]:
        """Smallest L after which the count no longer changes, if it changed at all."""
        last = self.counts[-1]
        L = self.radius
        while L > 0 and self.counts[L - 1] == last:
            L -= 1
        return L

    def to_rows(self) -> List[Dict[str, object]]:
        return [{"radius": L, "count": c} for L, c in enumerate(self.counts)]

    def to_json(self) -> Dict[str, object]:
        return {
            "block": self.block.to_json(),
            "counts": self.counts,
            "stableFrom": self.stable_from(),
            "elements": [g.to_json() for g in self.elements],
        }


def _element_key(g: AffElem) -> Tuple[int, Fraction]:
    return g.i, g.s


def pd_census(block: CompactBlock, radius: int, budget: int = 10_000_000) -> Census:
    """Census of the elements of the radius-L ball that move the block onto itself.

    Raises:
        BudgetExceededError: If the ball has more than budget elements
    """
    counts: List[int] = []
    hits: List[AffElem] = []
    for level, layer in enumerate(spheres(block.n, radius, budget)):
        for g in layer:
            if block.image(g).meets(block):
                hits.append(g)
        counts.append(len(hits))
        logger.debug(f"Census {block.kind} radius {level}: {len(hits)}")
    return Census(block, counts, sorted(hits, key=_element_key))


# cocompactness


@dataclass(frozen=True)
class CocompactWitness:
    element: AffElem
    normalized: TripleRRQ
    word: GroupWord
    length_bound: int

    def to_json(self) -> Dict[str, object]:
        return {
            "element": self.element.to_json(),
            "normalized": self.normalized.to_json(),
            "word": str(self.word),
            "wordLength": len(self.word),
            "lengthBound": self.length_bound,
        }


def in_fundamental_block(t: TripleRRQ) -> bool:
    """Membership in B* = {x in [0, 1), |x - y| in [1, n), zeta in Z_n}."""
    gap = abs(t.x - t.y)
    return 0 <= t.x < 1 and 1 <= gap < t.n and t.zeta.in_integers()


def _floor_log(q: Fraction, n: int) -> int:
    """The integer i with n^i <= q < n^(i+1), for q > 0."""
    i = 0
    while Fraction(n) ** i > q:
        i -= 1
    while Fraction(n) ** (i + 1) <= q:
        i += 1
    return i


def _ceil_log(q: Fraction, n: int) -> int:
    i = _floor_log(q, n)
    return i if Fraction(n) ** i == q else i + 1


def witness_length_bound(t: TripleRRQ, constant: int) -> int:
    """constant * n * (ceil log_n(size) + 1), size bounding every coordinate of t."""
    n = t.n
    gap = abs(t.x - t.y)
    size = max(Fraction(1), abs(t.x), abs(t.y), gap, 1 / gap)
    if not t.zeta.is_zero and t.zeta.low < 0:
        size = max(size, Fraction(n) ** (-t.zeta.low))
    return constant * n * (_ceil_log(size, n) + 1)


def cocompact_witness(t: TripleRRQ, constant: int = 8) -> CocompactWitness:
    """g with g^-1 t in B*.

    g = x -> n^i x + s with i = floor log_n |x - y| and s the unique element of
    c + n^i Z in (x - n^i, x], where c truncates zeta below index i.
    """
    n = t.n
    i = _floor_log(abs(t.x - t.y), n)
    scale = Fraction(n) ** i
    c = clone_containing(t.zeta, i - 1).center
    s = c + scale * math.floor((t.x - c) / scale)
    g = AffElem.make(n, i, s)
    normalized = act_triple(inv(g), t)
    assert isinstance(normalized, TripleRRQ)
    if not in_fundamental_block(normalized):  # pragma: no cover
        raise AssertionError(f"normaliser missed B* for {t}")
    word = normal_form_word(g)
    bound = witness_length_bound(t, constant)
    if len(word) > bound:
        logger.warning(f"Witness word length {len(word)} exceeds the recorded bound {bound}")
    return CocompactWitness(g, normalized, word, bound)


# contraction


@dataclass(frozen=True)
class Contraction:
    element: AffElem
    exponent: int
    image: Clone
    contained: bool

    def to_json(self) -> Dict[str, object]:
        return {
            "element": self.element.to_json(),
            "word": str(normal_form_word(self.element)),
            "j": self.exponent,
            "image": str(self.image),
            "contained": self.contained,
        }


def contraction_map(k_clone: Clone, u_clone: Clone, j: int) -> AffElem:
    """x -> n^j (x - center K) + center U."""
    if k_clone.n != u_clone.n:
        raise BaseMismatchError(k_clone.n, u_clone.n)
    n = k_clone.n
    scale = Fraction(n) ** j
    return AffElem.make(n, j, u_clone.center - scale * k_clone.center)


def contraction_element(k_clone: Clone, u_clone: Clone) -> Contraction:
    """g with g K inside U, using the least exponent j with n^-j radius(K) <= radius(U)."""
    j = u_clone.k - k_clone.k
    g = contraction_map(k_clone, u_clone, j)
    image = act_tree(g, k_clone)
    contained = u_clone.contains_clone(image) and u_clone.contains(act_Qn(g, k_clone.center_nadic()))
    if not contained:  # pragma: no cover
        raise AssertionError(f"contraction of {k_clone} missed {u_clone}")
    return Contraction(g, j, image, contained)


# source-sink probes


@dataclass
class ProbeReport:
    """Source and sink candidates with their sup-distance series."""

    sink: Clone
    source: RealInterval
    sup_q: List[float]
    sup_r: List[float]
    rate_q: float
    rate_r: float
    contracting: bool
    stretch_products: List[Fraction] = field(default_factory=list)
    product_bound: Fraction = Fraction(1)

    @property
    def products_in_bound(self) -> bool:
        lo, hi = 1 / self.product_bound, self.product_bound
        return all(lo <= p <= hi for p in self.stretch_products)

    def to_json(self) -> Dict[str, object]:
        return {
            "contracting": self.contracting,
            "sink": str(self.sink),
            "sinkCenter": str(self.sink.center),
            "source": self.source.to_json(),
            "rateQ": self.rate_q,
            "rateR": self.rate_r,
            "series": {
                "index": list(range(len(self.sup_q))),
                "supQ": self.sup_q,
                "supR": self.sup_r,
            },
            "productsInBound": self.products_in_bound,
        }


def _rate(values: Sequence[float]) -> float:
    """Slope of log(values) against the index, by least squares."""
    if len(values) < 2:
        return 0.0
    xs = np.arange(len(values), dtype=float)
    ys = np.log(np.asarray(values, dtype=float))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def source_sink_probe(
    gs: Sequence[AffElem], compact_r: RealInterval, compact_q: Clone, tol: float = 1e-9
) -> ProbeReport:
    """Follow g_i on a clone of Q_n and g_i^-1 on an interval of R.

    The sink candidate is the image of compact_q under the last element, the
    source candidate the image of compact_r under its inverse. Sup distances
    are exact: over a clone B, sup d(z, c) = max(radius B, d(center B, c)).

    Raises:
        ValueError: If the sequence is empty
    """
    if not gs:
        raise ValueError("a probe needs a nonempty sequence")
    last = gs[-1]
    sink = act_tree(last, compact_q)
    sink_center = sink.center_nadic()
    source = compact_r.image(inv(last))
    sup_q: List[float] = []
    sup_r: List[float] = []
    products: List[Fraction] = []
    for g in gs:
        image = act_tree(g, compact_q)
        sup_q.append(float(max(image.radius, nadic_dist(image.center_nadic(), sink_center))))
        pulled = compact_r.image(inv(g))
        sup_r.append(float(max(abs(pulled.lo - source.center), abs(pulled.hi - source.center))))
        products.append(stretch_R(g) * stretch_Qn(g))
    rate_q, rate_r = _rate(sup_q), _rate(sup_r)
    contracting = rate_q < -tol and rate_r < -tol
    if not contracting:
        logger.info("No source-sink contraction detected for the probe sequence")
    return ProbeReport(sink, source, sup_q, sup_r, rate_q, rate_r, contracting, products)
