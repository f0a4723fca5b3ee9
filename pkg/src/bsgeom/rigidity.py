"""
Commensurability and Quotient Classification

This module provides the algebra that closes the rigidity argument: the
commensurability test for BS(1,m) and BS(1,n), the presentations of the
quotient groups Gamma in the four cases, the infinite dihedral group B with
its injective endomorphisms, and the vcd / index / growth facts used to
exclude everything else.

Words are read left to right: the word "u v" acts by u first and then v.
With a: x -> x + 2 and r: x -> -x this makes r_i = a^-i r the reflection
about i, and a generator t acts by the contraction A^-1 of the expansion A
realising the endomorphism, so t b t^-1 acts by A o b o A^-1.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from bsgeom.bsgroup import free_abelian_growth, growth, growth_rate_estimates
from bsgeom.errors import PresentationConstraintError, SingularMatrixError
from bsgeom.quasisim.intervals import integer_root

logger = logging.getLogger(__name__)

Syllable = Tuple[str, int]
Word = Tuple[Syllable, ...]


# commensurability


def primitive_root(m: int) -> Tuple[int, int]:
    """(r, e) with m = r^e and e maximal.

    Raises:
        ValueError: If m < 2
    """
    if m < 2:
        raise ValueError(f"primitive roots are defined for m >= 2, got {m}")
    for e in range(m.bit_length(), 1, -1):
        r = integer_root(m, e)
        if r is not None and r >= 2:
            return r, e
    return m, 1


def commensurable(m: int, n: int) -> bool:
    """BS(1,m) and BS(1,n) are abstractly commensurable iff m, n are powers of a common integer."""
    return primitive_root(m)[0] == primitive_root(n)[0]


# words and presentations


def parse_word(text: str) -> Word:
    """Read "t a t^-1 a^-3" into syllables; "1" is the empty word."""
    syllables: List[Syllable] = []
    for token in text.split():
        if token == "1":
            continue
        gen, _, exp = token.partition("^")
        syllables.append((gen, int(exp) if exp else 1))
    return tuple(syllables)


def word_text(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in word)


def invert_word(word: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def _gap_word(word: Word) -> str:
    if not word:
        return "One(F)"
    return "*".join(g if e == 1 else f"{g}^{e}" for g, e in word)


class GammaCase(str, Enum):
    CASE1 = "1"
    CASE2 = "2"
    CASE3I = "3i"
    CASE3II = "3ii"


@dataclass(frozen=True)
class AffineGenerator:
    """x -> scale * x + shift, exact."""

    scale: Fraction
    shift: Fraction

    def __call__(self, x: Fraction) -> Fraction:
        return self.scale * x + self.shift

    def inverse(self) -> "AffineGenerator":
        return AffineGenerator(1 / self.scale, -self.shift / self.scale)


def _act(realization: Dict[str, AffineGenerator], word: Word, x: Fraction) -> Fraction:
    """Right action: the syllables act one after another, left to right."""
    for gen, exp in word:
        g = realization[gen] if exp > 0 else realization[gen].inverse()
        for _ in range(abs(exp)):
            x = g(x)
    return x


@dataclass(frozen=True)
class GammaPresentation:
    """Generators and defining relations lhs = rhs of a quotient group Gamma."""

    case: GammaCase
    m: int
    k: Optional[int]
    generators: Tuple[str, ...]
    relations: Tuple[Tuple[Word, Word], ...]
    plus_index: int
    plus_parameter: int

    @property
    def relators(self) -> Tuple[Word, ...]:
        return tuple(lhs + invert_word(rhs) for lhs, rhs in self.relations)

    def relation_strings(self) -> List[str]:
        return [f"{word_text(lhs)} = {word_text(rhs)}" for lhs, rhs in self.relations]

    def gap_text(self) -> str:
        """GAP input defining the group as a quotient of a free group."""
        names = ", ".join(f'"{g}"' for g in self.generators)
        binds = " ".join(f"{g} := F.{i + 1};;" for i, g in enumerate(self.generators))
        rels = ", ".join(_gap_word(r) for r in self.relators)
        return f"F := FreeGroup({names});;\n{binds}\nG := F / [ {rels} ];;\n"

    def realization(self) -> Dict[str, AffineGenerator]:
        """A faithful affine realisation on R (right action, t by a contraction)."""
        if self.case in (GammaCase.CASE1, GammaCase.CASE2):
            return {
                "a": AffineGenerator(Fraction(1), Fraction(1)),
                "t": AffineGenerator(Fraction(1, self.m), Fraction(0)),
            }
        expansion = dihedral_endo(self.m, self.k, MODE_OF_CASE[self.case]).realization
        return {
            "a": AffineGenerator(Fraction(1), Fraction(2)),
            "r": AffineGenerator(Fraction(-1), Fraction(0)),
            "t": expansion.inverse(),
        }

    def check_realization(self, probes: Sequence[Fraction] = (Fraction(0), Fraction(1), Fraction(7, 3))) -> bool:
        """Every relator acts trivially; two probes pin down an affine map."""
        rho = self.realization()
        return all(_act(rho, rel, x) == x for rel in self.relators for x in probes)

    def to_json(self) -> Dict[str, object]:
        return {
            "case": self.case.value,
            "m": self.m,
            "k": self.k,
            "generators": list(self.generators),
            "relations": self.relation_strings(),
            "gap": self.gap_text(),
            "plusSubgroup": {"index": self.plus_index, "isomorphicTo": f"BS(1,{self.plus_parameter})"},
        }


def _w(text: str) -> Word:
    return parse_word(text)


def enumerate_gamma(case: GammaCase, m: int, k: Optional[int] = None) -> GammaPresentation:
    """The presentation of Gamma in one case of the classification.

    Case 1 is BS(1,m), m >= 2. Case 2 is BS(1,m) with m <= -2, the
    orientation reversing two-generator form whose index-2 subgroup
    <a, t^2> is BS(1,m^2). Cases 3.i and 3.ii are HNN extensions of the
    infinite dihedral group, 3.ii with m = 2k + 1 >= 3.

    Raises:
        PresentationConstraintError: If the parameters violate the case's constraints
    """
    case = GammaCase(case)
    if case == GammaCase.CASE1:
        if m < 2:
            raise PresentationConstraintError(f"case 1 needs m >= 2, got {m}")
        return GammaPresentation(case, m, None, ("a", "t"), ((_w("t a t^-1"), _w(f"a^{m}")),), 1, m)
    if case == GammaCase.CASE2:
        if m > -2:
            raise PresentationConstraintError(f"case 2 needs m <= -2, got {m}")
        return GammaPresentation(case, m, None, ("a", "t"), ((_w("t a t^-1"), _w(f"a^{m}")),), 2, m * m)
    dihedral = ((_w("r^2"), ()), (_w("r a r^-1"), _w("a^-1")), (_w("t a t^-1"), _w(f"a^{m}")))
    if case == GammaCase.CASE3I:
        if m < 2:
            raise PresentationConstraintError(f"case 3.i needs m >= 2, got {m}")
        relations = dihedral + ((_w("t r t^-1"), _w("r")),)
        return GammaPresentation(case, m, None, ("a", "r", "t"), relations, 2, m)
    if m < 3 or m % 2 == 0:
        raise PresentationConstraintError(f"case 3.ii needs an odd m = 2k + 1 >= 3, got {m}")
    if k is not None and m != 2 * k + 1:
        raise PresentationConstraintError(f"case 3.ii needs m = 2k + 1, got m={m}, k={k}")
    k = (m - 1) // 2
    relations = dihedral + ((_w("t r t^-1"), _w(f"a^{-k} r")),)
    return GammaPresentation(case, m, k, ("a", "r", "t"), relations, 2, m)


# infinite dihedral group


@dataclass(frozen=True)
class DihedralElem:
    """x -> -x + shift when flip, else x + shift; shift is even."""

    flip: bool
    shift: int

    def __post_init__(self) -> None:
        if self.shift % 2:
            raise ValueError(f"dihedral elements have even shifts, got {self.shift}")

    @classmethod
    def identity(cls) -> "DihedralElem":
        return cls(False, 0)

    @classmethod
    def a(cls, power: int = 1) -> "DihedralElem":
        return cls(False, 2 * power)

    @classmethod
    def r(cls) -> "DihedralElem":
        return cls(True, 0)

    @classmethod
    def reflection(cls, i: int) -> "DihedralElem":
        """r_i = a^-i r, the reflection about i."""
        return cls(True, 2 * i)

    @property
    def is_reflection(self) -> bool:
        return self.flip

    @property
    def center(self) -> Fraction:
        """The fixed point of a reflection."""
        if not self.flip:
            raise ValueError("translations have no center")
        return Fraction(self.shift, 2)

    def __call__(self, x: Fraction) -> Fraction:
        return (-x if self.flip else x) + self.shift

    def then(self, other: "DihedralElem") -> "DihedralElem":
        """The product self * other: act by self, then by other."""
        if other.flip:
            return DihedralElem(not self.flip, -self.shift + other.shift)
        return DihedralElem(self.flip, self.shift + other.shift)

    def inverse(self) -> "DihedralElem":
        if self.flip:
            return self
        return DihedralElem(False, -self.shift)

    def normal_form(self) -> str:
        """"a^p" for translations, "a^-i r" for the reflection r_i."""
        if self.flip:
            i = self.shift // 2
            return "r" if i == 0 else f"a^{-i} r"
        return "1" if self.shift == 0 else f"a^{self.shift // 2}"


_DIHEDRAL_LETTERS = {"a": DihedralElem.a(), "r": DihedralElem.r()}


def eval_dihedral(word: str) -> DihedralElem:
    """Evaluate a word in a, r (exponents allowed) left to right."""
    g = DihedralElem.identity()
    for gen, exp in parse_word(word):
        letter = _DIHEDRAL_LETTERS[gen]
        step = letter if exp > 0 else letter.inverse()
        for _ in range(abs(exp)):
            g = g.then(step)
    return g


def dihedral_ball(radius: int) -> Set[DihedralElem]:
    """Elements of B of word length <= radius in a, a^-1, r."""
    gens = [DihedralElem.a(), DihedralElem.a(-1), DihedralElem.r()]
    seen = {DihedralElem.identity()}
    frontier = set(seen)
    for _ in range(radius):
        frontier = {g.then(s) for g in frontier for s in gens} - seen
        seen |= frontier
    return seen


class DihedralMode(str, Enum):
    FIX_REFLECTION = "fix-reflection"
    NO_FIXED_REFLECTION = "no-fixed-reflection"


MODE_OF_CASE = {GammaCase.CASE3I: DihedralMode.FIX_REFLECTION, GammaCase.CASE3II: DihedralMode.NO_FIXED_REFLECTION}


@dataclass(frozen=True)
class DihedralEndo:
    """phi(a) = a^m with phi(r) = r, or phi(r) = a^-k r when m = 2k + 1.

    Realised by the expansion x -> m x, resp. x -> m (x + 1/2) - 1/2, as
    phi(beta) = A o beta o A^-1.
    """

    m: int
    k: Optional[int]
    mode: DihedralMode

    @property
    def realization(self) -> AffineGenerator:
        if self.mode == DihedralMode.FIX_REFLECTION:
            return AffineGenerator(Fraction(self.m), Fraction(0))
        return AffineGenerator(Fraction(self.m), Fraction(self.m - 1, 2))

    def __call__(self, beta: DihedralElem) -> DihedralElem:
        c = self.m - 1 if self.mode == DihedralMode.NO_FIXED_REFLECTION else 0
        if beta.flip:
            return DihedralElem(True, self.m * beta.shift + c)
        return DihedralElem(False, self.m * beta.shift)

    def on_generators(self) -> Dict[str, str]:
        image_r = "r" if self.mode == DihedralMode.FIX_REFLECTION else f"a^{-self.k} r"
        return {"a": f"a^{self.m}", "r": image_r}

    def reflection_index(self, i: int) -> int:
        """j with phi(r_i) = r_j."""
        return self(DihedralElem.reflection(i)).shift // 2

    def fixed_reflections(self, radius: int) -> List[int]:
        return [i for i in range(-radius, radius + 1) if self.reflection_index(i) == i]

    def in_image(self, beta: DihedralElem) -> bool:
        """Whether beta = phi(gamma) for some gamma in B."""
        c = self.m - 1 if (beta.flip and self.mode == DihedralMode.NO_FIXED_REFLECTION) else 0
        return (beta.shift - c) % (2 * self.m) == 0

    def is_injective_on_ball(self, radius: int) -> bool:
        ball = dihedral_ball(radius)
        return len({self(b) for b in ball}) == len(ball)

    def preserves_ends(self) -> bool:
        return self.m > 0

    def check_realization(self, probes: Sequence[Fraction] = (Fraction(0), Fraction(3, 7))) -> bool:
        """A o beta o A^-1 = phi(beta) on R for the generators beta = a, r."""
        A = self.realization
        A_inv = A.inverse()
        for beta in (DihedralElem.a(), DihedralElem.r()):
            image = self(beta)
            if any(A(beta(A_inv(x))) != image(x) for x in probes):
                return False
        return True

    def to_json(self) -> Dict[str, object]:
        A = self.realization
        return {
            "m": self.m,
            "k": self.k,
            "mode": self.mode.value,
            "generators": self.on_generators(),
            "realization": {"scale": str(A.scale), "shift": str(A.shift)},
        }


def dihedral_endo(m: int, k: Optional[int] = None, mode: DihedralMode = DihedralMode.FIX_REFLECTION) -> DihedralEndo:
    """The injective, non-surjective, end-preserving endomorphism of B of the given mode.

    Raises:
        PresentationConstraintError: If m (and k) do not fit the mode
    """
    mode = DihedralMode(mode)
    if mode == DihedralMode.FIX_REFLECTION:
        if m < 2:
            raise PresentationConstraintError(f"fix-reflection endomorphisms need m >= 2, got {m}")
        return DihedralEndo(m, None, mode)
    if m < 3 or m % 2 == 0:
        raise PresentationConstraintError(f"no-fixed-reflection endomorphisms need odd m >= 3, got {m}")
    if k is not None and m != 2 * k + 1:
        raise PresentationConstraintError(f"need m = 2k + 1, got m={m}, k={k}")
    return DihedralEndo(m, (m - 1) // 2, mode)


# dimension, index and growth


def vcd_mapping_torus(r: int) -> int:
    """vcd of the ascending HNN extension of Z^r: r + 1."""
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    return r + 1


def cohomology_profile(r: int, index: int, max_degree: Optional[int] = None) -> Dict[int, str]:
    """Compactly supported cohomology of R^r x T_I by degree: zero except infinite rank at r + 1."""
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    if index < 2:
        raise ValueError(f"the tree T_I needs I >= 2 to have infinitely many ends, got {index}")
    top = max_degree if max_degree is not None else r + 2
    return {k: ("infinite-rank" if k == r + 1 else "zero") for k in range(top + 1)}


def _det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("endomorphism matrix must be square")
    sign, prev = 1, 1
    for col in range(size - 1):
        pivot = next((row for row in range(col, size) if a[row][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        for row in range(col + 1, size):
            for j in range(col + 1, size):
                a[row][j] = (a[row][j] * a[col][col] - a[row][col] * a[col][j]) // prev
        prev = a[col][col]
    return sign * a[-1][-1]


def endo_index(matrix: Sequence[Sequence[int]]) -> int:
    """[Z^r : psi(Z^r)] = |det psi|.

    Raises:
        SingularMatrixError: If psi is not injective
    """
    index = abs(_det(matrix))
    if index == 0:
        raise SingularMatrixError("endomorphism with zero determinant is not injective")
    if index == 1:
        logger.info("Index 1: the mapping torus is Z^r x Z, excluded by polynomial growth")
    return index


def lattice_index_by_cosets(matrix: Sequence[Sequence[int]], box: int) -> int:
    """Count classes of Z^2 points in [0, box)^2 modulo the column lattice of a 2x2 matrix."""
    (p, q), (r, s) = matrix
    det = p * s - q * r
    if det == 0:
        raise SingularMatrixError("endomorphism with zero determinant is not injective")
    classes = set()
    for x, y in product(range(box), repeat=2):
        # coordinates in the lattice basis, reduced mod 1
        u = Fraction(s * x - q * y, det)
        v = Fraction(-r * x + p * y, det)
        classes.add((u - math.floor(u), v - math.floor(v)))
    return len(classes)


@dataclass(frozen=True)
class TorsionFreeDescriptor:
    k: int
    presentation: GammaPresentation
    witness_parameter: int
    root: int

    def to_json(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "presentation": self.presentation.to_json(),
            "commensurableVia": f"BS(1,{self.witness_parameter})",
            "class": f"powers of {self.root}",
        }


def torsionfree_classify(k: int) -> TorsionFreeDescriptor:
    """The torsion-free group BS(1,k) with |k| >= 2 and its commensurability class.

    For k <= -2 the class is read through the index-2 subgroup BS(1,k^2).

    Raises:
        PresentationConstraintError: If |k| <= 1
    """
    if abs(k) < 2:
        raise PresentationConstraintError(f"|k| must be >= 2 (|k| <= 1 gives polynomial growth), got {k}")
    case = GammaCase.CASE1 if k > 0 else GammaCase.CASE2
    witness = k if k > 0 else k * k
    return TorsionFreeDescriptor(k, enumerate_gamma(case, k), witness, primitive_root(witness)[0])


@dataclass(frozen=True)
class GrowthComparison:
    """Exponential growth of BS(1,m) set against the quadratic growth of Z^2."""

    bs_counts: List[int]
    bs_rates: List[float]
    z2_counts: List[int]
    z2_fit: Tuple[float, float, float]
    z2_fit_error: float

    @property
    def bs_superlinear(self) -> bool:
        """log beta(L) / L stays bounded below by a positive constant."""
        tail = self.bs_rates[len(self.bs_rates) // 2 :]
        return min(tail) > 0.1

    def to_json(self) -> Dict[str, object]:
        return {
            "bsCounts": self.bs_counts,
            "bsRates": self.bs_rates,
            "z2Counts": self.z2_counts,
            "z2Quadratic": list(self.z2_fit),
            "z2FitError": self.z2_fit_error,
            "bsExponential": self.bs_superlinear,
        }


def growth_comparison(m: int, radius: int, control_radius: int = 30, budget: int = 10_000_000) -> GrowthComparison:
    """Ball growth of BS(1,m) against a quadratic fit of Z^2 ball sizes.

    This is the check that an index-1 endomorphism (Gamma_+ = Z^2) cannot
    occur for a group quasi-isometric to BS(1,n).
    """
    bs = growth(m, radius, budget)
    z2 = free_abelian_growth(2, control_radius)
    L = np.arange(len(z2), dtype=float)
    coeffs = np.polyfit(L, np.asarray(z2, dtype=float), 2)
    fitted = np.polyval(coeffs, L[-1])
    error = abs(fitted - z2[-1]) / z2[-1]
    return GrowthComparison(
        bs, growth_rate_estimates(bs), z2, (float(coeffs[0]), float(coeffs[1]), float(coeffs[2])), float(error)
    )
