"""Tests for tool functions module."""

import math
from fractions import Fraction

import pytest
from pydantic import ValidationError

from bsgeom.config import ExperimentConfig
from bsgeom.errors import PresentationConstraintError
from bsgeom.nadic import CloneRelation
from bsgeom.tools.boundary import NAdicParams, TreeParams, nadic_info, tree_info
from bsgeom.tools.classification import (
    ClassifyParams,
    CommensurableParams,
    IndexParams,
    TorsionFreeParams,
    classify_case,
    commensurability,
    mapping_torus,
    torsion_free,
)
from bsgeom.tools.conjugacy import ConjugateParams, ProfileParams, conjugate_map, profile_map
from bsgeom.tools.dynamics import (
    CensusParams,
    CocompactParams,
    ContractParams,
    ProbeParams,
    census,
    cocompact,
    contract,
    probe,
)
from bsgeom.tools.geometry import BarycenterParams, DistParams, PointSpec, barycenter_info, dist_info
from bsgeom.tools.group import (
    GrowthParams,
    WitnessParams,
    WordParams,
    discontinuity_info,
    growth_info,
    word_info,
)
from bsgeom.tools.parsing import parse_matrix, parse_nadic, parse_rational


@pytest.fixture
def config():
    """Create a configuration with a small conjugacy check window."""
    return ExperimentConfig(conjugacy_window=100.0, conjugacy_grid=801)


@pytest.fixture
def translation_map():
    """Create the plhomeo.v1 document of a conjugate of x -> x + 1."""
    return {"breakpoints": [["-1", "0"], ["0", "2"], ["2", "3"]], "tails": {"lo": "1", "hi": "1"}}


@pytest.fixture
def dilation_map():
    """Create the plhomeo.v1 document of a conjugate of x -> 2x."""
    return {"breakpoints": [["1", "2"], ["2", "3"]], "tails": {"lo": "2", "hi": "2"}}


def test_parsing():
    """Test the literal parsers."""
    assert parse_rational("0.125") == Fraction(1, 8)
    assert parse_rational("-7/4") == Fraction(-7, 4)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    assert parse_nadic("2:0:1|0", 2).to_fraction() == 1
    assert parse_nadic("-1", 3).to_fraction() == -1
    assert parse_matrix("[[2,1],[0,3]]") == [[2, 1], [0, 3]]
    with pytest.raises(ValueError):
        parse_matrix("[[1,2]]")
    with pytest.raises(ValueError):
        parse_matrix("[[1.5]]")


def test_params_validation():
    """Test that parameter models reject out-of-range values."""
    with pytest.raises(ValidationError):
        WordParams(n=1, word="a")
    with pytest.raises(ValidationError):
        ClassifyParams(case="4", m=2)
    with pytest.raises(ValidationError):
        TreeParams(depth=13)


def test_word_info():
    """Test the normal form and stretch factors of a word."""
    result = word_info(WordParams(word="bAbaa"))
    assert result["map"] == "x -> 2^2 x + 6"
    assert result["stretchR"] == "4"
    assert result["stretchQn"] == "1/4"
    assert result["identity"] is False
    assert word_info(WordParams(word="baBAA"))["identity"] is True
    with pytest.raises(ValueError):
        word_info(WordParams(word="abc"))


def test_growth_and_witnesses(config):
    """Test ball counts and the discontinuity witnesses."""
    result = growth_info(GrowthParams(radius=3), config)
    assert result["counts"][:2] == [1, 5]
    assert result["rows"][0]["rate"] is None
    compared = growth_info(GrowthParams(radius=6, control_radius=6), config)
    assert "comparison" in compared
    rows = discontinuity_info(WitnessParams(count=3))["rows"]
    assert [r["k"] for r in rows] == [1, 2, 3]
    assert rows[0]["realSize"] == "1/2"


def test_nadic_info():
    """Test distance and clone relation of 1 and 3 in Q_2."""
    result = nadic_info(NAdicParams(x="1", y="3", k=0))
    assert result["dist"]["value"] == "1"
    assert result["agreementIndex"] == 0
    assert result["relation"] == CloneRelation.EQUAL.value
    assert result["sum"]["value"] == "4"
    assert result["neg"]["value"] == "-1"


def test_tree_info():
    """Test the truncation sizes and the divergence of two lines."""
    result = tree_info(TreeParams(depth=3, up=1))
    assert result["vertices"] == 31
    assert result["edges"] == 30
    assert len(result["graph"]["nodes"]) == 31
    dot = tree_info(TreeParams(depth=1, format="dot"))["dot"]
    assert dot.startswith("digraph T2 {")
    ends = tree_info(TreeParams(depth=1, ends=["0", "1"]))
    assert ends["lines"]["certificate"] == "exact"
    with pytest.raises(ValueError):
        tree_info(TreeParams(ends=["0"]))


def test_dist_and_barycenter(config):
    """Test distances on a common plane and the barycenter output."""
    result = dist_info(
        DistParams(p=PointSpec(x="0", y="1"), q=PointSpec(x="0", y="2")), config
    )
    assert result["certificate"] == "exact"
    assert result["lo"] == pytest.approx(math.log(2))
    assert result["hi"] == pytest.approx(math.log(2))
    center = barycenter_info(BarycenterParams(x="0", y="1", eta="1"))
    assert "median" in center
    assert "svg" not in center


def test_conjugate_map(config, translation_map, dilation_map):
    """Test conjugation to the translation and dilation models."""
    shifted = conjugate_map(ConjugateParams(map=translation_map, radius=16), config)
    assert shifted["case"] == "translation"
    assert shifted["alpha"] == 2.0
    assert len(shifted["rows"]) == 21
    scaled = conjugate_map(ConjugateParams(map=dilation_map, mode="dilation"), config)
    assert scaled["s"] == 2.0


def test_profile_map(config, dilation_map):
    """Test classification and stretch extraction for a dilation conjugate."""
    result = profile_map(ProfileParams(map=dilation_map, radius=8), config)
    assert result["classification"]["case"] == "UniqueFixedPoint"
    assert result["classification"]["point"] == "0"
    assert "estimate" in result


def test_dynamics_tools(config):
    """Test census, contraction, cocompactness and the probe."""
    assert census(CensusParams(radius=3), config)["counts"] == [1, 3, 7, 7]
    same = contract(ContractParams(source="Z", target="Z"))
    assert same["contained"] is True
    assert same["certificate"] == "exact"
    witness = cocompact(CocompactParams(x="0", y="128"), config)
    assert witness["element"]["i"] == 7
    report = probe(ProbeParams(steps=5, interval="[1,2]"))
    assert len(report["rows"]) == 5


def test_classification_tools():
    """Test presentations, commensurability, torsion-free and mapping tori."""
    case = classify_case(ClassifyParams(case="3ii", m=5))
    assert case["realizationHolds"] is True
    assert case["endomorphism"]["fixedReflections"] == []
    assert len(case["rows"]) == 11
    assert "endomorphism" not in classify_case(ClassifyParams(case="1", m=3))
    with pytest.raises(PresentationConstraintError):
        classify_case(ClassifyParams(case="3ii", m=4))

    result = commensurability(CommensurableParams(m=8, n=2))
    assert result["m"]["root"] == 2 and result["m"]["exponent"] == 3
    assert result["commensurable"] is True
    assert torsion_free(TorsionFreeParams(k=-2))["commensurableVia"] == "BS(1,4)"

    torus = mapping_torus(IndexParams(matrix="[[2,1],[0,3]]"))
    assert (torus["rank"], torus["index"], torus["vcd"]) == (2, 6, 3)
    assert torus["cohomology"]["3"] != "zero"
    unimodular = mapping_torus(IndexParams(matrix="[[0,1],[1,0]]"))
    assert unimodular["excludedByGrowth"] is True
    assert "cohomology" not in unimodular
