"""
Clone Tree

This module provides the homogeneous directed tree T_n as the inclusion
lattice of clones. The tree is never materialised: vertices are Clone values
and every query is answered locally from their digit prefixes.

Height convention: a vertex of combinatorial height k sits at height
k * log(n). The integers Z_n form the clone with k = -1 and sit at height
-log(n); the vertex at height 0 is nZ_n. Edges run from a clone to each of
its n maximal sub-clones, so height grows towards the ends in Q_n and falls
towards the end at minus infinity.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional

import networkx as nx

from bsgeom.errors import EqualPointsError
from bsgeom.nadic import (
    Clone,
    NAdic,
    _same_base,
    agreement_index,
    clone_containing,
)

logger = logging.getLogger(__name__)

TreeVertex = Clone

# offsets this close to an edge end are snapped onto the vertex
_SNAP = 1e-12


def log_base(n: int) -> float:
    return math.log(n)


def parent(c: Clone) -> Clone:
    """The unique clone one level up (drop the digit at index k)."""
    return c.truncate(c.k - 1)


def child(c: Clone, digit: int) -> Clone:
    """The sub-clone obtained by appending digit at index k + 1."""
    if not 0 <= digit < c.n:
        raise ValueError(f"child digit {digit} out of range for base {c.n}")
    if c.prefix:
        return Clone.from_prefix(c.n, c.k + 1, c.low, c.prefix + (digit,))
    return Clone.from_prefix(c.n, c.k + 1, c.k + 1, (digit,))


def children(c: Clone) -> List[Clone]:
    """All n children of c, ordered by appended digit."""
    return [child(c, d) for d in range(c.n)]


def ancestors(c: Clone, depth: int) -> List[Clone]:
    """The chain c, parent(c), ... of length depth + 1."""
    chain = [c]
    for _ in range(depth):
        chain.append(parent(chain[-1]))
    return chain


def vertex_height(c: Clone) -> float:
    return c.k * log_base(c.n)


def meet(c: Clone, d: Clone) -> Clone:
    """The smallest clone containing both c and d."""
    _same_base(c, d)
    top = min(c.k, d.k)
    for i in range(min(c.low, d.low), top + 1):
        if c.digit(i) != d.digit(i):
            return c.truncate(i - 1)
    return c.truncate(top)


@dataclass(frozen=True)
class TreePoint:
    """A point of T_n: a vertex plus an offset along the edge to one child.

    At offset 0 the point is the vertex itself and child_digit is None.
    """

    vertex: Clone
    offset: float = 0.0
    child_digit: Optional[int] = None

    def __post_init__(self) -> None:
        step = log_base(self.vertex.n)
        if not 0.0 <= self.offset < step:
            raise ValueError(f"edge offset {self.offset} outside [0, log {self.vertex.n})")
        if self.offset == 0.0:
            if self.child_digit is not None:
                object.__setattr__(self, "child_digit", None)
        elif self.child_digit is None or not 0 <= self.child_digit < self.vertex.n:
            raise ValueError("a point inside an edge needs a child digit in range")

    @classmethod
    def at(cls, vertex: Clone) -> "TreePoint":
        return cls(vertex)

    @classmethod
    def on_line(cls, zeta: NAdic, height: float) -> "TreePoint":
        """The point of height h on the vertical line ending at zeta."""
        step = log_base(zeta.n)
        k = math.floor(height / step)
        t = height - k * step
        if t >= step - _SNAP:
            k, t = k + 1, 0.0
        elif t < _SNAP:
            t = 0.0
        vertex = clone_containing(zeta, k)
        if t == 0.0:
            return cls(vertex)
        return cls(vertex, t, zeta.digit(k + 1))

    @property
    def n(self) -> int:
        return self.vertex.n

    @property
    def height(self) -> float:
        return vertex_height(self.vertex) + self.offset

    @property
    def lower_vertex(self) -> Clone:
        """The deepest vertex whose ancestor path passes through this point."""
        if self.child_digit is None:
            return self.vertex
        return child(self.vertex, self.child_digit)

    def __str__(self) -> str:
        if self.child_digit is None:
            return f"{self.vertex}"
        return f"{self.vertex}+{self.offset:.6g}->{self.child_digit}"


def comparable(u: TreePoint, v: TreePoint) -> bool:
    """True when one point lies on the ancestor path of the other."""
    a, b = u.lower_vertex, v.lower_vertex
    return a.contains_clone(b) or b.contains_clone(a)


def tree_dist(u: TreePoint, v: TreePoint) -> float:
    """Geodesic distance in T_n.

    On a common ancestor path the distance is the height difference; otherwise
    the geodesic runs up to the meet vertex M and down again, giving
    (h(u) - h(M)) + (h(v) - h(M)).
    """
    _same_base(u.vertex, v.vertex)
    if comparable(u, v):
        return abs(u.height - v.height)
    m = meet(u.lower_vertex, v.lower_vertex)
    return u.height + v.height - 2.0 * vertex_height(m)


@dataclass(frozen=True)
class VerticalLine:
    """The line of clones containing zeta, one for each height k."""

    zeta: NAdic

    def clone(self, k: int) -> Clone:
        return clone_containing(self.zeta, k)

    def chain(self, k_from: int, k_to: int) -> Iterator[Clone]:
        for k in range(k_from, k_to + 1):
            yield self.clone(k)

    def point(self, height: float) -> TreePoint:
        return TreePoint.on_line(self.zeta, height)

    def contains(self, p: TreePoint) -> bool:
        return p.lower_vertex.contains(self.zeta)


@dataclass(frozen=True)
class LineDistance:
    vertex: Clone
    value: Fraction

    @property
    def height(self) -> float:
        return vertex_height(self.vertex)


def line_distance(zeta: NAdic, other: NAdic) -> LineDistance:
    """Divergence vertex of two vertical lines and the distance e^(-h) it encodes.

    Raises:
        EqualPointsError: If the two ends coincide
    """
    k = agreement_index(zeta, other)
    if k is None:
        raise EqualPointsError("vertical lines of equal ends do not diverge")
    return LineDistance(clone_containing(zeta, k), Fraction(zeta.n) ** (-k))


def kappa_vertex(eta: NAdic, zeta: NAdic) -> TreeVertex:
    """The tree vertex where the lines to eta and zeta part ways."""
    return line_distance(eta, zeta).vertex


def truncation(root: Clone, depth: int, up: int = 0) -> nx.DiGraph:
    """The finite subtree spanned by root's ancestor `up` levels above and all
    its descendants down to `depth` levels below root.
    """
    top = ancestors(root, up)[-1] if up else root
    graph = nx.DiGraph(base=root.n)
    levels = depth + up
    frontier = [top]
    graph.add_node(str(top), k=top.k, clone=top)
    for _ in range(levels):
        nxt = []
        for c in frontier:
            for ch in children(c):
                graph.add_node(str(ch), k=ch.k, clone=ch)
                graph.add_edge(str(c), str(ch))
                nxt.append(ch)
        frontier = nxt
    logger.debug(f"Built tree truncation with {graph.number_of_nodes()} vertices")
    return graph
