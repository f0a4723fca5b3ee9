"""Tests for clone tree module."""

import math
import random
from fractions import Fraction

import networkx as nx
import pytest

from bsgeom.errors import EqualPointsError
from bsgeom.nadic import Clone, NAdic, clone_containing, nadic_dist, random_nadic
from bsgeom.treespace import (
    TreePoint,
    VerticalLine,
    ancestors,
    child,
    children,
    kappa_vertex,
    line_distance,
    meet,
    parent,
    tree_dist,
    truncation,
    vertex_height,
)


@pytest.fixture
def rng():
    """Create a seeded random source for sampled checks."""
    return random.Random(7)


def q(value, n=2):
    return NAdic.from_fraction(Fraction(value), n)


def test_parent_child():
    """Test that parent undoes child for every digit."""
    c = clone_containing(q(5), 1)
    for d in range(2):
        assert parent(child(c, d)) == c
    assert len(children(Clone.integers(3))) == 3
    with pytest.raises(ValueError):
        child(c, 2)


@pytest.mark.parametrize("n", [2, 3, 10])
def test_vertex_height_of_integers(n):
    """Test that Z_n sits at height -log n and nZ_n at height 0."""
    integers = Clone.integers(n)
    assert integers.k == -1
    assert vertex_height(integers) == pytest.approx(-math.log(n))
    assert vertex_height(child(integers, 0)) == pytest.approx(0.0)
    assert vertex_height(parent(integers)) == pytest.approx(-2 * math.log(n))


def test_children_partition_parent(rng):
    """Test that every element of a clone lies in exactly one child."""
    c = clone_containing(q(3, 3), 0)
    for _ in range(50):
        x = random_nadic(rng, 3)
        inside = [ch for ch in children(c) if ch.contains(x)]
        assert len(inside) == (1 if c.contains(x) else 0)


def test_ancestors_chain():
    """Test the ancestor chain heights."""
    chain = ancestors(clone_containing(q(5), 2), 3)
    assert [c.k for c in chain] == [2, 1, 0, -1]
    assert chain[-1] == Clone.integers(2)


def test_meet():
    """Test the smallest common clone of two vertices."""
    a = clone_containing(q(5), 3)
    b = clone_containing(q(1), 3)
    m = meet(a, b)
    assert m == clone_containing(q(1), 1)
    assert m.contains_clone(a) and m.contains_clone(b)


def test_tree_dist_vertices():
    """Test distances between vertices on and off a common ancestor path."""
    step = math.log(2)
    a = TreePoint(clone_containing(q(5), 3))
    b = TreePoint(clone_containing(q(1), 3))
    top = TreePoint(Clone.integers(2))
    assert tree_dist(a, top) == pytest.approx(4 * step)
    assert tree_dist(a, b) == pytest.approx(4 * step)
    assert tree_dist(a, a) == 0


def test_on_line_heights():
    """Test points on a vertical line at vertex and edge heights."""
    step = math.log(3)
    zeta = q(7, 3)
    p = TreePoint.on_line(zeta, 2 * step)
    assert p.child_digit is None
    assert p.vertex == clone_containing(zeta, 2)
    mid = TreePoint.on_line(zeta, 2.5 * step)
    assert mid.vertex == clone_containing(zeta, 2)
    assert mid.child_digit == zeta.digit(3)
    assert mid.height == pytest.approx(2.5 * step)


def test_tree_point_rejects_bad_offset():
    """Test offset validation."""
    with pytest.raises(ValueError):
        TreePoint(Clone.integers(2), 1.0, 0)
    with pytest.raises(ValueError):
        TreePoint(Clone.integers(2), 0.3, None)


def test_line_distance_matches_nadic_dist(rng):
    """Test that the divergence vertex encodes the n-adic distance."""
    for _ in range(200):
        zeta, eta = random_nadic(rng, 2), random_nadic(rng, 2)
        if zeta == eta:
            continue
        ld = line_distance(zeta, eta)
        assert ld.value == nadic_dist(zeta, eta)
        assert ld.vertex.contains(zeta) and ld.vertex.contains(eta)
        assert math.exp(-ld.height) == pytest.approx(float(ld.value))


def test_line_distance_equal_ends():
    """Test that equal ends raise EqualPointsError."""
    with pytest.raises(EqualPointsError):
        line_distance(q(1), q(1))


def test_kappa_vertex_is_symmetric(rng):
    """Test the branch vertex of two lines is symmetric."""
    for _ in range(50):
        zeta, eta = random_nadic(rng, 3), random_nadic(rng, 3)
        if zeta != eta:
            assert kappa_vertex(zeta, eta) == kappa_vertex(eta, zeta)


def test_vertical_line_chain():
    """Test the clones along a vertical line are nested."""
    line = VerticalLine(q(5))
    chain = list(line.chain(-1, 3))
    for big, small in zip(chain, chain[1:]):
        assert big.contains_clone(small)
    assert line.contains(line.point(2.0))


def test_truncation_graph():
    """Test the size and shape of a finite truncation."""
    graph = truncation(Clone.integers(2), 3, up=1)
    assert graph.graph["base"] == 2
    assert graph.number_of_nodes() == 2**5 - 1
    assert graph.number_of_edges() == graph.number_of_nodes() - 1
    assert nx.is_arborescence(graph)
    heights = sorted({data["k"] for _, data in graph.nodes(data=True)})
    assert heights == [-2, -1, 0, 1, 2]
