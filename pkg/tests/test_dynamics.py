"""Tests for boundary dynamics module."""

import math
import random
from fractions import Fraction

import pytest

from bsgeom.bsgroup import AffElem, act_tree, ball, inv, mul, power
from bsgeom.errors import BaseMismatchError, EqualPointsError
from bsgeom.dynamics import (
    CompactBlock,
    RealInterval,
    TripleRQQ,
    TripleRRQ,
    act_triple,
    cocompact_witness,
    contraction_element,
    contraction_map,
    control_block,
    in_fundamental_block,
    pd_census,
    source_sink_probe,
    standard_block,
)
from bsgeom.nadic import Clone, NAdic, random_clone, random_nadic


@pytest.fixture
def rng():
    """Create a seeded random source for sampled checks."""
    return random.Random(4)


def _random_rrq(rng, n):
    x = Fraction(rng.randint(-500, 500), rng.randint(1, 30))
    y = x + Fraction(rng.choice([-1, 1]) * rng.randint(1, 10**4), rng.randint(1, 10**3))
    return TripleRRQ(x, y, random_nadic(rng, n))


def test_triples_reject_diagonal():
    """Test that triples on the diagonal are rejected."""
    with pytest.raises(EqualPointsError):
        TripleRRQ(1, 1, NAdic.zero(2))
    with pytest.raises(EqualPointsError):
        TripleRQQ(0, NAdic.zero(3), NAdic.zero(3))
    with pytest.raises(BaseMismatchError):
        TripleRQQ(0, NAdic.zero(2), NAdic.zero(3))


def test_act_triple(rng):
    """Test the diagonal action on both triple spaces."""
    t = TripleRRQ(0, 1, NAdic.zero(2))
    moved = act_triple(AffElem.b(2), t)
    assert (moved.x, moved.y) == (0, 2)
    assert act_triple(AffElem.identity(2), t) == t
    elements = list(ball(2, 4))
    for _ in range(100):
        g, h = rng.choice(elements), rng.choice(elements)
        s = _random_rrq(rng, 2)
        assert act_triple(mul(g, h), s) == act_triple(g, act_triple(h, s))
        q = TripleRQQ(s.x, s.zeta, s.zeta + 1)
        assert act_triple(mul(g, h), q) == act_triple(g, act_triple(h, q))
    with pytest.raises(BaseMismatchError):
        act_triple(AffElem.b(3), t)


def test_block_validation():
    """Test block shapes, disjointness and parsing."""
    with pytest.raises(ValueError):
        CompactBlock((RealInterval(0, 2), RealInterval(1, 3)), (Clone.integers(2),), 2)
    with pytest.raises(ValueError):
        CompactBlock((RealInterval(0, 1),), (Clone.integers(2), Clone.integers(2)), 2)
    with pytest.raises(ValueError):
        RealInterval(1, 0)
    block = CompactBlock.parse("[0,1]x[2,3]xZ", 2)
    assert block == standard_block(2)
    assert block.kind == "RRQ"
    assert block.clone_radius == 2
    assert block.contains(TripleRRQ(Fraction(1, 2), 3, NAdic.from_fraction(7, 2)))
    assert not block.contains(TripleRRQ(Fraction(1, 2), 3, NAdic.from_fraction(Fraction(1, 2), 2)))
    mixed = CompactBlock.parse("[0,1]xZx-1:-1:1", 2)
    assert mixed.kind == "RQQ"


def test_standard_census_stabilizes():
    """Test that the standard block census is 1, 3, then 7 from radius 2 on."""
    census = pd_census(standard_block(2), 8)
    assert census.counts[:3] == [1, 3, 7]
    assert census.counts[2:] == [7] * 7
    assert census.stable_from() == 2
    assert AffElem.identity(2) in census.elements
    assert AffElem.make(2, 1, -2) in census.elements
    assert AffElem.make(2, -1, Fraction(1, 2)) in census.elements
    assert census.to_rows()[4] == {"radius": 4, "count": 7}


def test_control_census_grows():
    """Test that the T(R,R,R) control keeps gaining translations."""
    census = pd_census(control_block(2), 7)
    assert census.counts[:4] == [1, 3, 3, 5]
    assert census.counts[-1] > census.counts[3]
    assert all(g.i == 0 for g in census.elements)


def test_cocompact_witness_height():
    """Test that a gap of n^7 is normalised by the b-exponent 7."""
    t = TripleRRQ(0, 2**7, NAdic.zero(2))
    witness = cocompact_witness(t)
    assert witness.element.i == 7
    assert witness.normalized == TripleRRQ(0, 1, NAdic.zero(2))
    assert len(witness.word) <= witness.length_bound


def test_cocompact_witness_in_block():
    """Test that the witness is the identity on a triple already in B*."""
    t = TripleRRQ(Fraction(1, 3), Fraction(3, 2), NAdic.from_fraction(5, 2))
    assert in_fundamental_block(t)
    witness = cocompact_witness(t)
    assert witness.element == AffElem.identity(2)


def test_cocompact_witness_random(rng):
    """Test normalisation of random triples in Q_2 and Q_3."""
    for n in (2, 3):
        for _ in range(200):
            t = _random_rrq(rng, n)
            witness = cocompact_witness(t)
            assert in_fundamental_block(witness.normalized)
            assert act_triple(witness.element, witness.normalized) == t


def test_contraction_examples():
    """Test the exponent for K of height -2 into U of height 3."""
    k_clone = Clone.from_prefix(2, -2, -3, [1])
    u_clone = Clone.from_prefix(2, 3, 0, [1, 0, 1, 1])
    result = contraction_element(k_clone, u_clone)
    assert result.exponent == 5
    assert result.image == u_clone
    z = Clone.integers(2)
    assert contraction_element(z, z).element == AffElem.identity(2)


def test_contraction_random_and_minimal(rng):
    """Test inclusion on random pairs and failure of exponent j - 1."""
    for _ in range(100):
        k_clone, u_clone = random_clone(rng, 2), random_clone(rng, 2)
        result = contraction_element(k_clone, u_clone)
        assert result.contained
        assert u_clone.contains_clone(act_tree(result.element, k_clone))
        smaller = contraction_map(k_clone, u_clone, result.exponent - 1)
        assert not u_clone.contains_clone(act_tree(smaller, k_clone))
    with pytest.raises(BaseMismatchError):
        contraction_element(Clone.integers(2), Clone.integers(3))


def test_probe_powers_of_b():
    """Test source-sink dynamics of b^i with sink 0 in Q_2."""
    gs = [power(AffElem.b(2), i) for i in range(1, 11)]
    report = source_sink_probe(gs, RealInterval(1, 2), Clone.integers(2))
    assert report.contracting
    assert report.sink.center == 0
    assert report.rate_q == pytest.approx(-math.log(2))
    assert report.rate_r < 0
    assert report.products_in_bound
    data = report.to_json()
    assert len(data["series"]["supQ"]) == 10


def test_probe_identity_and_conjugates():
    """Test that the identity does not contract and conjugation moves the sink."""
    ids = [AffElem.identity(2)] * 5
    assert not source_sink_probe(ids, RealInterval(1, 2), Clone.integers(2)).contracting
    h = AffElem.translation(2, 3)
    base = [power(AffElem.b(2), i) for i in range(1, 11)]
    conjugates = [mul(mul(h, g), inv(h)) for g in base]
    report = source_sink_probe(conjugates, RealInterval(5, 6), Clone.integers(2))
    assert report.contracting
    assert report.sink.contains(NAdic.from_fraction(3, 2))
    with pytest.raises(ValueError):
        source_sink_probe([], RealInterval(0, 1), Clone.integers(2))
