"""Tests for PL homeomorphism module."""

from fractions import Fraction

import numpy as np
import pytest

from bsgeom.errors import BreakpointBudgetError, ParseError
from bsgeom.quasisim.plhomeo import (
    SCHEMA,
    PLHomeo,
    StretchInterval,
    compose,
    conjugate,
    inverse,
    power,
    stretch_interval,
)


@pytest.fixture
def psi():
    """Create x on (-oo, 0], 2x on [0, 1] and x + 1 on [1, oo)."""
    return PLHomeo.from_points([(0, 0), (1, 2)], 1, 1)


@pytest.fixture
def bumped_dilation(psi):
    """Create psi o M_2 o psi^-1: slope 2 except slope 1 on [1, 2]."""
    return conjugate(psi, PLHomeo.dilation(2))


def test_evaluation(psi):
    """Test exact evaluation on every piece and at breakpoints."""
    assert psi(-3) == -3
    assert psi(Fraction(1, 2)) == 1
    assert psi(1) == 2
    assert psi(5) == 6
    assert psi.slopes == (1, 2, 1)
    assert psi.slope_at(0) == 2


def test_float_evaluation_matches_exact(psi):
    """Test the vectorised evaluation against exact values."""
    xs = np.linspace(-4, 4, 81)
    exact = np.array([float(psi(Fraction(float(x)))) for x in xs])
    assert np.allclose(psi.evaluate(xs), exact, atol=1e-12)


def test_invalid_maps():
    """Test that non-homeomorphisms are rejected."""
    with pytest.raises(ValueError):
        PLHomeo.from_points([(0, 0), (1, 0)], 1, 1)
    with pytest.raises(ValueError):
        PLHomeo.from_points([(0, 0), (1, 1)], -1, 1)
    with pytest.raises(ValueError):
        PLHomeo((Fraction(0), Fraction(1)), (Fraction(0),), Fraction(1), Fraction(1))


def test_canonical_affine():
    """Test that an affine map collapses to the single anchor at 0."""
    f = PLHomeo.from_points([(1, 3), (2, 5)], 2, 2)
    assert f == PLHomeo.affine(2, 1)
    assert f.is_affine
    assert f.breakpoint_count == 0
    assert PLHomeo.identity().is_identity


def test_conjugate_formula(bumped_dilation):
    """Test the hand-computed conjugate of M_2."""
    expected = PLHomeo.from_points([(1, 2), (2, 3)], 2, 2)
    assert bumped_dilation == expected


def test_inverse_and_compose(psi, bumped_dilation):
    """Test f o f^-1 = id for increasing and decreasing maps."""
    for f in (psi, bumped_dilation, PLHomeo.from_points([(0, 1), (2, -3)], -1, -3)):
        assert compose(f, inverse(f)).is_identity
        assert compose(inverse(f), f).is_identity


def test_power(bumped_dilation):
    """Test powers against repeated composition."""
    f = bumped_dilation
    assert power(f, 3) == compose(f, compose(f, f))
    assert power(f, -2) == inverse(compose(f, f))
    assert power(f, 0).is_identity
    assert power(f, 4) == conjugate(
        PLHomeo.from_points([(0, 0), (1, 2)], 1, 1), PLHomeo.dilation(16)
    )


def test_compose_cap(psi, bumped_dilation):
    """Test that the breakpoint cap stops a large composition."""
    with pytest.raises(BreakpointBudgetError):
        compose(psi, bumped_dilation, cap=2)


def test_stretch_interval(psi):
    """Test the stretch interval and its arithmetic."""
    iv = stretch_interval(psi)
    assert iv == StretchInterval(Fraction(1), Fraction(2))
    assert iv.ratio == 2
    assert iv.inverse() == StretchInterval(Fraction(1, 2), Fraction(1))
    assert iv**2 == StretchInterval(Fraction(1), Fraction(4))
    assert iv**-1 == iv.inverse()
    assert (iv * iv.inverse()).contains(Fraction(1))
    with pytest.raises(ValueError):
        StretchInterval(Fraction(2), Fraction(1))


def test_fixed_points(bumped_dilation):
    """Test isolated fixed points and fixed intervals."""
    assert bumped_dilation.fixed_points().unique == 0
    assert PLHomeo.translation(1).fixed_points().empty
    f = PLHomeo.from_points([(0, 0), (1, 1)], 2, 2)
    fixed = f.fixed_points()
    assert fixed.intervals == ((Fraction(0), Fraction(1)),)
    assert fixed.points == ()
    g = PLHomeo.from_points([(0, 0), (1, Fraction(1, 2)), (2, 2)], 2, 2)
    assert g.fixed_points().points == (Fraction(0), Fraction(2))


def test_json_round_trip(psi):
    """Test the plhomeo.v1 document format."""
    data = psi.to_json()
    assert data["schema"] == SCHEMA
    assert data["breakpoints"] == [["0", "0"], ["1", "2"]]
    assert data["slopes"] == ["2"]
    assert data["tails"] == {"lo": "1", "hi": "1"}
    assert PLHomeo.from_json(data) == psi


def test_from_json_variants():
    """Test rational strings, floats, affine documents and bad input."""
    f = PLHomeo.from_json({"breakpoints": [["-1/2", 0], [0.5, "3/2"]], "tails": {"lo": 1, "hi": 2}})
    assert f(Fraction(-1, 2)) == 0
    assert f.slopes == (1, Fraction(3, 2), 2)
    document = {
        "schema": SCHEMA,
        "breakpoints": [],
        "tails": {"lo": "3", "hi": "3"},
        "intercept": 1,
    }
    affine = PLHomeo.from_json(document)
    assert affine == PLHomeo.affine(3, 1)
    with pytest.raises(ValueError):
        PLHomeo.from_json({"schema": "plhomeo.v0", "breakpoints": [], "tails": {"lo": 1, "hi": 1}})
    with pytest.raises(ValueError):
        PLHomeo.from_json(
            {"breakpoints": [[0, 0], [1, 2]], "slopes": ["3"], "tails": {"lo": 1, "hi": 1}}
        )


@pytest.mark.parametrize(
    "document",
    [
        {"tails": {"lo": "1"}},
        {"breakpoints": [], "tails": {"lo": "1"}},
        {"breakpoints": [["0"]], "tails": {"lo": "1", "hi": "1"}},
        {"breakpoints": [], "tails": {"lo": "one", "hi": "1"}},
        {"breakpoints": [], "tails": ["1", "1"]},
        ["1", "1"],
    ],
)
def test_from_json_malformed(document):
    """Test that structurally broken documents raise ParseError."""
    with pytest.raises(ParseError):
        PLHomeo.from_json(document)
