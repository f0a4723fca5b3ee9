"""Tests for commensurability and quotient classification module."""

from fractions import Fraction

import pytest

from bsgeom.errors import PresentationConstraintError, SingularMatrixError
from bsgeom.rigidity import (
    DihedralElem,
    DihedralMode,
    GammaCase,
    cohomology_profile,
    commensurable,
    dihedral_ball,
    dihedral_endo,
    endo_index,
    enumerate_gamma,
    eval_dihedral,
    growth_comparison,
    lattice_index_by_cosets,
    parse_word,
    primitive_root,
    torsionfree_classify,
    vcd_mapping_torus,
    word_text,
)


def _bases(limit):
    """Every r >= 2 of which m is a positive power, for m <= limit."""
    bases = {m: set() for m in range(2, limit + 1)}
    for r in range(2, limit + 1):
        value = r
        while value <= limit:
            bases[value].add(r)
            value *= r
    return bases


def test_primitive_root():
    """Test maximal exponents."""
    assert primitive_root(8) == (2, 3)
    assert primitive_root(2) == (2, 1)
    assert primitive_root(36) == (6, 2)
    assert primitive_root(3**20) == (3, 20)
    with pytest.raises(ValueError):
        primitive_root(1)


def test_primitive_root_large_integers():
    """Test exact roots of integers far beyond float range."""
    assert primitive_root(7**200) == (7, 200)
    assert primitive_root(12**150) == (12, 150)
    assert primitive_root(2**521 * 3) == (2**521 * 3, 1)
    assert primitive_root((2**61 - 1) ** 3) == (2**61 - 1, 3)
    assert commensurable(6**300, 36)
    assert not commensurable(2**400, 3**250)


def test_commensurable_against_brute_force():
    """Test commensurability on all pairs up to 200."""
    bases = _bases(200)
    for m in range(2, 201):
        for n in range(2, 201):
            assert commensurable(m, n) == bool(bases[m] & bases[n])
    assert commensurable(2, 8)
    assert not commensurable(6, 12)


def test_words():
    """Test syllable parsing and printing."""
    word = parse_word("t a t^-1 a^-3")
    assert word == (("t", 1), ("a", 1), ("t", -1), ("a", -3))
    assert word_text(word) == "t a t^-1 a^-3"
    assert parse_word("1") == ()
    assert word_text(()) == "1"


def test_enumerate_gamma_cases():
    """Test the four presentations and their realisations."""
    case1 = enumerate_gamma(GammaCase.CASE1, 2)
    assert case1.generators == ("a", "t")
    assert case1.relation_strings() == ["t a t^-1 = a^2"]
    assert "t*a*t^-1*a^-2" in case1.gap_text()

    case3i = enumerate_gamma(GammaCase.CASE3I, 2)
    assert case3i.relation_strings() == [
        "r^2 = 1",
        "r a r^-1 = a^-1",
        "t a t^-1 = a^2",
        "t r t^-1 = r",
    ]
    case3ii = enumerate_gamma("3ii", 5)
    assert case3ii.k == 2
    assert case3ii.relation_strings()[-1] == "t r t^-1 = a^-2 r"

    case2 = enumerate_gamma(GammaCase.CASE2, -3)
    assert case2.plus_index == 2
    assert case2.to_json()["plusSubgroup"]["isomorphicTo"] == "BS(1,9)"

    for p in (case1, case2, case3i, case3ii, enumerate_gamma(GammaCase.CASE3II, 3, 1)):
        assert p.check_realization()


def test_enumerate_gamma_constraints():
    """Test parameter constraints per case."""
    with pytest.raises(PresentationConstraintError):
        enumerate_gamma(GammaCase.CASE1, 1)
    with pytest.raises(PresentationConstraintError):
        enumerate_gamma(GammaCase.CASE2, -1)
    with pytest.raises(PresentationConstraintError):
        enumerate_gamma(GammaCase.CASE3II, 2)
    with pytest.raises(PresentationConstraintError):
        enumerate_gamma(GammaCase.CASE3II, 5, 1)


def test_dihedral_calculus():
    """Test products, inverses and normal forms in B."""
    r1 = eval_dihedral("a^-1 r")
    assert r1 == DihedralElem.reflection(1)
    assert r1.center == 1
    assert r1(Fraction(3)) == -1
    assert r1.then(r1) == DihedralElem.identity()
    assert eval_dihedral("r a r^-1") == DihedralElem.a(-1)
    assert eval_dihedral("a^3").normal_form() == "a^3"
    assert DihedralElem.reflection(-2).normal_form() == "a^2 r"
    assert len(dihedral_ball(2)) == 8
    with pytest.raises(ValueError):
        DihedralElem(False, 1)
    with pytest.raises(ValueError):
        DihedralElem.a().center


def test_fix_reflection_endo():
    """Test phi(a) = a^m, phi(r) = r."""
    phi = dihedral_endo(3)
    assert phi(DihedralElem.r()) == DihedralElem.r()
    assert phi(DihedralElem.a()) == DihedralElem.a(3)
    assert phi.fixed_reflections(10) == [0]
    assert not phi.in_image(DihedralElem.a())
    assert phi.in_image(DihedralElem.a(6))
    assert phi.is_injective_on_ball(12)
    assert phi.check_realization()
    assert phi.preserves_ends()


def test_no_fixed_reflection_endo():
    """Test phi(r_i) = r_(2ki+k+i) and the absence of a fixed reflection."""
    for k in range(1, 26):
        phi = dihedral_endo(2 * k + 1, k, DihedralMode.NO_FIXED_REFLECTION)
        for i in range(-50, 51):
            assert phi.reflection_index(i) == 2 * k * i + k + i
        assert phi.fixed_reflections(50) == []
        assert phi.check_realization()
    phi = dihedral_endo(3, mode="no-fixed-reflection")
    assert phi.on_generators() == {"a": "a^3", "r": "a^-1 r"}
    assert not phi.in_image(DihedralElem.r())
    assert phi.is_injective_on_ball(12)
    with pytest.raises(PresentationConstraintError):
        dihedral_endo(4, mode=DihedralMode.NO_FIXED_REFLECTION)
    with pytest.raises(PresentationConstraintError):
        dihedral_endo(1)


def test_vcd_and_cohomology():
    """Test the vcd formula and the support of the cohomology profile."""
    assert vcd_mapping_torus(1) == 2
    assert vcd_mapping_torus(2) == 3
    for r in range(1, 9):
        profile = cohomology_profile(r, 2)
        assert [k for k, v in profile.items() if v != "zero"] == [r + 1]
    with pytest.raises(ValueError):
        cohomology_profile(1, 1)
    with pytest.raises(ValueError):
        vcd_mapping_torus(0)


def test_endo_index():
    """Test determinants against coset counts."""
    assert endo_index([[5]]) == 5
    assert endo_index([[2, 1], [0, 3]]) == 6
    assert lattice_index_by_cosets([[2, 1], [0, 3]], 12) == 6
    assert endo_index([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30
    assert endo_index([[0, 1], [1, 0]]) == 1
    with pytest.raises(SingularMatrixError):
        endo_index([[1, 2], [2, 4]])


def test_torsionfree_classify():
    """Test the commensurability class of BS(1,k)."""
    negative = torsionfree_classify(-2)
    assert negative.witness_parameter == 4
    assert negative.root == 2
    assert negative.presentation.case == GammaCase.CASE2
    assert torsionfree_classify(2).to_json()["commensurableVia"] == "BS(1,2)"
    with pytest.raises(PresentationConstraintError):
        torsionfree_classify(1)


def test_growth_comparison():
    """Test exponential growth of BS(1,2) against the quadratic Z^2 control."""
    comparison = growth_comparison(2, 8)
    assert comparison.bs_superlinear
    assert comparison.z2_fit_error < 0.01
    assert comparison.z2_fit[0] == pytest.approx(2.0)
