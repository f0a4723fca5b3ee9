"""Tests for cyclic conjugacy engine module."""

import random
from fractions import Fraction

import numpy as np
import pytest

from bsgeom.config import ExperimentConfig
from bsgeom.errors import MalformedCoverError, WrongClassificationError
from bsgeom.quasisim.conjugacy import (
    FiniteOrder,
    NoFixedPoint,
    NotUniformQS,
    UniqueFixedPoint,
    classify,
    conjugate_auto,
    conjugate_to_dilation,
    conjugate_to_translation,
    verify_rubber_band,
)
from bsgeom.quasisim.plhomeo import PLHomeo, compose, conjugate


@pytest.fixture
def psi():
    """Create x on (-oo, 0], 2x on [0, 1] and x + 1 on [1, oo)."""
    return PLHomeo.from_points([(0, 0), (1, 2)], 1, 1)


@pytest.fixture
def config():
    """Create a configuration with a small conjugacy check window."""
    return ExperimentConfig(conjugacy_window=100.0, conjugacy_grid=801)


@pytest.fixture
def wide_config():
    """Create a configuration checking conjugacies on [-1000, 1000]."""
    return ExperimentConfig(conjugacy_window=1000.0, conjugacy_grid=2001)


def _random_psi(rng):
    """A PL homeomorphism fixing 0 with slopes in [1/4, 4] and breakpoints in [-5, 5]."""
    count = rng.randint(1, 20)
    xs = sorted(Fraction(v, 4) for v in rng.sample(range(-20, 21), count))
    slopes = [Fraction(rng.randint(1, 4), rng.randint(1, 4)) for _ in range(count + 1)]
    psi = PLHomeo.from_slopes(xs, slopes)
    return compose(PLHomeo.translation(-psi(0)), psi)


def test_classify_types():
    """Test each dynamical type on small examples."""
    assert classify(PLHomeo.translation(-1)).to_json()["direction"] == "-"
    assert isinstance(classify(PLHomeo.translation(3)), NoFixedPoint)
    attracting = classify(PLHomeo.dilation(Fraction(1, 2)))
    assert isinstance(attracting, UniqueFixedPoint)
    assert attracting.kind == "attracting"
    assert classify(PLHomeo.affine(2, 1)).point == -1
    assert isinstance(classify(PLHomeo.affine(-1, 4)), FiniteOrder)
    with pytest.raises(ValueError):
        classify(PLHomeo.identity())


def test_classify_witnesses():
    """Test non-uniformity witnesses for maps without an affine model."""
    fixed_interval = classify(PLHomeo.from_points([(0, 0), (1, 1)], 2, 2))
    assert isinstance(fixed_interval, NotUniformQS)
    assert fixed_interval.witness.kind == "fixed_interval"
    assert fixed_interval.witness.ratio > 16

    two_points = classify(PLHomeo.from_points([(0, 0), (1, Fraction(1, 2)), (2, 2)], 2, 2))
    assert two_points.witness.kind == "two_fixed_points"

    one_sided = classify(PLHomeo.from_points([(0, 0)], Fraction(1, 2), 2))
    assert one_sided.witness.kind == "one_sided_fixed_point"
    assert one_sided.to_json()["case"] == "NotUniformQS"


def test_classify_witness_power_follows_config():
    """Test that the witness search stops at the configured largest power."""
    f = PLHomeo.from_points([(0, 0), (1, 1)], 2, 2)
    assert classify(f).witness.power == 5
    short = classify(f, config=ExperimentConfig(witness_max_power=3))
    assert short.witness.power == 3
    assert short.witness.ratio == pytest.approx(4.5)


def test_classify_profile_check_uses_radius():
    """Test that the stretch profile check squares only up to the power radius."""
    # x + 1 on the left, 1 + 2x on the right: b/a of f^k is 2^k
    f = PLHomeo.from_points([(0, 1)], 1, 2)
    assert isinstance(classify(f, 16), NoFixedPoint)
    kind = classify(f, 32)
    assert isinstance(kind, NotUniformQS)
    assert kind.witness.kind == "stretch_profile"
    assert kind.witness.power == 32
    assert kind.witness.ratio == 2.0**32


def test_classify_orientation_reversing():
    """Test that orientation reversing maps are read through their square."""
    kind = classify(PLHomeo.affine(-2))
    assert isinstance(kind, UniqueFixedPoint)
    assert kind.via_square


def test_translation_example(psi, config):
    """Test the conjugacy of psi o T_1 o psi^-1 to the translation by 2."""
    f = conjugate(psi, PLHomeo.translation(1))
    assert f == PLHomeo.from_points([(-1, 0), (0, 2), (2, 3)], 1, 1)
    result = conjugate_to_translation(f, 0, 16, config)
    assert result.case == "translation"
    assert result.value == 2
    assert result.bilip_measured == 2
    assert result.certificate == 2
    assert result.rubber_band
    assert result.sup_error < 1e-9
    phi = result.phi
    assert phi(5) == 8
    assert phi(-3) == -6
    assert phi(1) == 1
    assert phi.inverse_value(4) == 3
    assert np.allclose(phi.evaluate(np.array([-3.0, 1.0, 5.0])), [-6.0, 1.0, 8.0])
    restricted = phi.restrict(0, 3)
    assert restricted(3) == 4
    assert restricted(1) == 1
    assert restricted.slopes == (1, 2)
    cover = phi.orbit_cover()
    assert cover[0][0] is None and cover[-1][1] is None
    data = result.to_json()
    assert data["case"] == "translation"
    assert data["s_or_alpha"] == 2.0
    assert data["withinCertificate"] is True


def test_dilation_example(psi):
    """Test the conjugacy of psi o M_2 o psi^-1 to M_2."""
    f = conjugate(psi, PLHomeo.dilation(2))
    result = conjugate_to_dilation(f, 32)
    assert result.case == "dilation"
    assert result.value == 2
    assert result.certificate == 8
    assert result.bilip_measured == 2
    assert result.rubber_band
    assert result.sup_error < 1e-9
    assert result.phi(0) == 0
    assert result.phi(Fraction(3, 2)) == Fraction(3, 2)
    assert result.phi(3) == 4
    data = result.to_json()
    assert data["quasihomConstant"] == 2.0
    assert data["seedSlopeInBounds"] is True
    assert data["withinCertificate"] is True
    assert data["fixedPoint"] == "0"
    estimate = data["estimate"]
    assert abs(estimate["s"] - 2.0) / 2.0 <= estimate["relError"]


def test_pure_models(config):
    """Test that affine maps conjugate by the identity up to shift."""
    result = conjugate_auto(PLHomeo.dilation(2), 16, config)
    assert result.case == "dilation"
    assert result.value == 2
    assert result.bilip_measured == 1
    assert result.phi(7) == 7

    shifted = conjugate_auto(PLHomeo.translation(1), 16, config)
    assert shifted.case == "translation"
    assert shifted.value == 1
    assert shifted.phi(Fraction(5, 2)) == Fraction(5, 2)


def test_attracting_fixed_point(config):
    """Test that an attracting fixed point gives the model M_(1/s)."""
    result = conjugate_to_dilation(PLHomeo.affine(Fraction(1, 3), 2), 16, config)
    assert result.value == Fraction(1, 3)
    assert result.to_json()["fixedPoint"] == "3"
    assert result.sup_error < 1e-9


def test_wrong_classification(config):
    """Test that the conjugacy builders reject the wrong dynamical type."""
    with pytest.raises(WrongClassificationError):
        conjugate_to_translation(PLHomeo.dilation(2), 0, 16, config)
    with pytest.raises(WrongClassificationError):
        conjugate_to_dilation(PLHomeo.translation(1), 16, config)
    with pytest.raises(WrongClassificationError):
        conjugate_auto(PLHomeo.affine(-1, 0), 16, config)


@pytest.mark.slow
def test_random_translation_conjugates(wide_config):
    """Test conjugacies of random conjugates of T_1."""
    rng = random.Random(11)
    for _ in range(100):
        psi = _random_psi(rng)
        f = conjugate(psi, PLHomeo.translation(1))
        result = conjugate_to_translation(f, 0, 16, wide_config)
        assert result.value == psi(1)
        assert result.sup_error < 1e-9
        assert result.bilip_measured <= result.certificate
        assert result.rubber_band


@pytest.mark.slow
@pytest.mark.parametrize("s", [Fraction(2), Fraction(3), Fraction(5), Fraction(3, 2)])
def test_random_dilation_conjugates(wide_config, s):
    """Test conjugacies of random conjugates of M_s."""
    rng = random.Random(int(s * 100))
    for _ in range(25):
        psi = _random_psi(rng)
        f = conjugate(psi, PLHomeo.dilation(s))
        result = conjugate_to_dilation(f, 32, wide_config)
        assert result.value == s
        assert result.sup_error < 1e-9
        estimate = result.extras["estimate"]
        assert abs(estimate["s"] - float(s)) / float(s) <= estimate["relError"] + 1e-12
        assert result.phi(0) == 0


def test_rubber_band_on_plhomeo(psi):
    """Test the rubber band check with an explicit cover."""
    cover = [(None, Fraction(0)), (Fraction(0), None)]
    assert verify_rubber_band(psi, cover, 2)
    assert not verify_rubber_band(psi, cover, Fraction(3, 2))
    with pytest.raises(MalformedCoverError):
        verify_rubber_band(psi, [(Fraction(0), Fraction(1))], 2)
    with pytest.raises(MalformedCoverError):
        verify_rubber_band(psi, [(None, Fraction(0)), (Fraction(1), None)], 2)
    with pytest.raises(ValueError):
        verify_rubber_band(psi, cover, Fraction(1, 2))
