"""
Baumslag-Solitar Group BS(1,n)

This module provides BS(1,n) = <a, b | b a b^-1 = a^n> as the group of exact
affine maps x -> n^i x + s with s in Z[1/n]. Composition of maps is the group
law, so evaluating a word solves the word problem. The module also covers the
actions on R, Q_n, the upper half-plane and the clone tree, stretch factors,
and Cayley ball enumeration.
"""

import logging
import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import List, Sequence, Set, Tuple, Union

from bsgeom.errors import BaseMismatchError, BudgetExceededError
from bsgeom.nadic import Clone, NAdic, clone_containing, nadic_dist

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, float]

LETTERS = "aAbB"
_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}
_TOKEN = re.compile(r"([aAbB])(?:\^(-?\d+))?")


def _split_translation(s: Fraction, n: int) -> Tuple[int, int]:
    """Write s = p / n^j with j >= 0 minimal; s must lie in Z[1/n]."""
    if s == 0:
        return 0, 0
    j, scaled = 0, s
    while scaled.denominator != 1:
        scaled *= n
        j += 1
    return scaled.numerator, j


def in_z_one_over_n(s: Fraction, n: int) -> bool:
    """Membership of a rational in Z[1/n]."""
    d = Fraction(s).denominator
    g = math.gcd(d, n)
    while g > 1:
        while d % g == 0:
            d //= g
        g = math.gcd(d, n)
    return d == 1


@dataclass(frozen=True)
class AffElem:
    """The element x -> n^i x + p / n^j of BS(1,n).

    The pair (p, j) is normalised so that n does not divide p unless j = 0,
    which makes dataclass equality and hashing agree with group equality.
    """

    n: int
    i: int
    p: int
    j: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"base must be >= 2, got {self.n}")
        if self.j < 0 or (self.j > 0 and self.p % self.n == 0):
            raise ValueError("translation part is not normalised; use AffElem.make")

    @classmethod
    def make(cls, n: int, i: int, s: Number) -> "AffElem":
        """Build an element from its exponent and an exact translation s."""
        s = Fraction(s)
        if not in_z_one_over_n(s, n):
            raise ValueError(f"{s} is not an element of Z[1/{n}]")
        p, j = _split_translation(s, n)
        return cls(n, i, p, j)

    @classmethod
    def identity(cls, n: int) -> "AffElem":
        return cls(n, 0, 0, 0)

    @classmethod
    def a(cls, n: int) -> "AffElem":
        return cls(n, 0, 1, 0)

    @classmethod
    def b(cls, n: int) -> "AffElem":
        return cls(n, 1, 0, 0)

    @classmethod
    def translation(cls, n: int, s: Number) -> "AffElem":
        return cls.make(n, 0, s)

    @property
    def s(self) -> Fraction:
        return Fraction(self.p, self.n**self.j)

    @property
    def scale(self) -> Fraction:
        return Fraction(self.n) ** self.i

    def __mul__(self, other: "AffElem") -> "AffElem":
        return mul(self, other)

    def __str__(self) -> str:
        return f"x -> {self.n}^{self.i} x + {self.s}"

    def to_json(self) -> dict:
        return {"n": self.n, "i": self.i, "p": str(self.p), "j": self.j}


def _check(g: AffElem, h: AffElem) -> None:
    if g.n != h.n:
        raise BaseMismatchError(g.n, h.n)


def mul(g: AffElem, h: AffElem) -> AffElem:
    """The composition g o h, i.e. x -> g(h(x))."""
    _check(g, h)
    return AffElem.make(g.n, g.i + h.i, g.scale * h.s + g.s)


def inv(g: AffElem) -> AffElem:
    return AffElem.make(g.n, -g.i, -g.s / g.scale)


def is_identity(g: AffElem) -> bool:
    return g.i == 0 and g.p == 0


def power(g: AffElem, k: int) -> AffElem:
    result = AffElem.identity(g.n)
    base = g if k >= 0 else inv(g)
    k = abs(k)
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


# words


@dataclass(frozen=True)
class GroupWord:
    """A word over a, A = a^-1, b, B = b^-1."""

    letters: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for ch in self.letters:
            if ch not in _INVERSE:
                raise ValueError(f"letter {ch!r} is not one of a, A, b, B")

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse words like "bAba", "b a b^-1 a^-2" (capital = inverse)."""
        compact = re.sub(r"\s+", "", text)
        letters: List[str] = []
        pos = 0
        while pos < len(compact):
            match = _TOKEN.match(compact, pos)
            if not match:
                raise ValueError(f"cannot parse word {text!r} at position {pos}")
            letter, exponent = match.group(1), int(match.group(2) or 1)
            if exponent < 0:
                letter, exponent = _INVERSE[letter], -exponent
            letters.extend(letter * exponent)
            pos = match.end()
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __str__(self) -> str:
        return "".join(self.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple(_INVERSE[ch] for ch in reversed(self.letters)))

    def free_reduce(self) -> "GroupWord":
        stack: List[str] = []
        for ch in self.letters:
            if stack and stack[-1] == _INVERSE[ch]:
                stack.pop()
            else:
                stack.append(ch)
        return GroupWord(tuple(stack))


def _letter(ch: str, n: int) -> AffElem:
    if ch == "a":
        return AffElem.a(n)
    if ch == "A":
        return AffElem(n, 0, -1, 0)
    if ch == "b":
        return AffElem.b(n)
    return AffElem(n, -1, 0, 0)


def eval_word(w: Union[GroupWord, str], n: int) -> AffElem:
    """The element a word represents; the empty word gives the identity."""
    if isinstance(w, str):
        w = GroupWord.parse(w)
    g = AffElem.identity(n)
    for ch in w.letters:
        g = mul(g, _letter(ch, n))
    return g


def relator(n: int) -> GroupWord:
    """The defining relator b a b^-1 a^-n."""
    return GroupWord(("b", "a", "B") + ("A",) * n)


def _power_word(letter: str, k: int) -> Tuple[str, ...]:
    if k >= 0:
        return (letter,) * k
    return (_INVERSE[letter],) * (-k)


def normal_form_word(g: AffElem) -> GroupWord:
    """An explicit word for g of length O(n log|p| + |i| + j).

    Uses g = b^-j a^p b^(j+i) and expands a^p through the base-n digits of |p|
    with a^(n^t) = b^t a b^-t.
    """
    n = g.n
    sign_letter = "a" if g.p >= 0 else "A"
    digits: List[int] = []
    m = abs(g.p)
    while m:
        m, d = divmod(m, n)
        digits.append(d)
    translation: List[str] = []
    for t, d in enumerate(digits):
        if t:
            translation.append("b")
        translation.extend(sign_letter * d)
    translation.extend(_power_word("b", -(len(digits) - 1)) if digits else ())
    letters = _power_word("b", -g.j) + tuple(translation) + _power_word("b", g.j + g.i)
    return GroupWord(letters).free_reduce()


def word_length_upper_bound(g: AffElem) -> int:
    return len(normal_form_word(g))


# actions


def act_R(g: AffElem, x: Number) -> Number:
    """The boundary action on R, exact for rational x."""
    if isinstance(x, float):
        return float(g.scale) * x + float(g.s)
    return g.scale * Fraction(x) + g.s


def act_Qn(g: AffElem, zeta: NAdic) -> NAdic:
    """The boundary action on Q_n through the n-adic ring operations."""
    if zeta.n != g.n:
        raise BaseMismatchError(g.n, zeta.n)
    return zeta.shift(g.i) + g.s


def act_H2(g: AffElem, z: Tuple[Number, Number]) -> Tuple[Number, Number]:
    """The isometric extension to the upper half-plane: (n^i x + s, n^i y)."""
    x, y = z
    if isinstance(x, float) or isinstance(y, float):
        scale = float(g.scale)
        return scale * float(x) + float(g.s), scale * float(y)
    return g.scale * Fraction(x) + g.s, g.scale * Fraction(y)


def act_tree(g: AffElem, c: Clone) -> Clone:
    """The action on clones; the image of a ball of height k has height k + i."""
    if c.n != g.n:
        raise BaseMismatchError(g.n, c.n)
    image = NAdic.from_fraction(g.scale * c.center + g.s, g.n)
    return clone_containing(image, c.k + g.i)


def height_action(g: AffElem, t: float) -> float:
    """g moves every height t to t + i log n."""
    return t + g.i * math.log(g.n)


def stretch_R(g: AffElem) -> Fraction:
    return g.scale


def stretch_Qn(g: AffElem) -> Fraction:
    return 1 / g.scale


@dataclass(frozen=True)
class DiscontinuityWitness:
    element: AffElem
    real_size: Fraction
    nadic_size: Fraction


def proper_discontinuity_witness(k: int, n: int) -> DiscontinuityWitness:
    """g_k = translation by k / n^k: bounded on R, unbounded on Q_n as k grows."""
    s = Fraction(k, n**k)
    g = AffElem.translation(n, s)
    zero = NAdic.zero(n)
    return DiscontinuityWitness(g, abs(s), nadic_dist(zero, NAdic.from_fraction(s, n)))


# ball enumeration


def generators(n: int) -> List[AffElem]:
    return [_letter(ch, n) for ch in LETTERS]


def spheres(n: int, radius: int, budget: int = 10_000_000) -> List[Set[AffElem]]:
    """Breadth-first spheres S(0), ..., S(radius) of the Cayley graph.

    Raises:
        BudgetExceededError: If more than budget elements would be stored
    """
    gens = generators(n)
    identity = AffElem.identity(n)
    seen: Set[AffElem] = {identity}
    layers: List[Set[AffElem]] = [{identity}]
    for level in range(1, radius + 1):
        layer: Set[AffElem] = set()
        for g in layers[-1]:
            for s in gens:
                h = mul(g, s)
                if h not in seen:
                    seen.add(h)
                    layer.add(h)
            if len(seen) > budget:
                logger.warning(f"Ball enumeration for n={n} stopped at radius {level}")
                raise BudgetExceededError(budget, len(seen))
        layers.append(layer)
        logger.debug(f"Sphere {level} for n={n}: {len(layer)} elements")
    return layers


def ball(n: int, radius: int, budget: int = 10_000_000) -> Set[AffElem]:
    """All elements of word length at most radius."""
    result: Set[AffElem] = set()
    for layer in spheres(n, radius, budget):
        result |= layer
    return result


def growth(n: int, radius: int, budget: int = 10_000_000) -> List[int]:
    """Cumulative ball sizes beta(0), ..., beta(radius)."""
    counts, total = [], 0
    for layer in spheres(n, radius, budget):
        total += len(layer)
        counts.append(total)
    return counts


def free_abelian_growth(rank: int, radius: int) -> List[int]:
    """Ball sizes of Z^rank with its standard generators, by direct BFS."""
    gens = []
    for axis, sign in product(range(rank), (1, -1)):
        vec = [0] * rank
        vec[axis] = sign
        gens.append(tuple(vec))
    origin = (0,) * rank
    seen = {origin}
    queue = deque([(origin, 0)])
    counts = [0] * (radius + 1)
    while queue:
        v, d = queue.popleft()
        counts[d] += 1
        if d == radius:
            continue
        for g in gens:
            w = tuple(x + y for x, y in zip(v, g))
            if w not in seen:
                seen.add(w)
                queue.append((w, d + 1))
    total, cumulative = 0, []
    for c in counts:
        total += c
        cumulative.append(total)
    return cumulative


def growth_rate_estimates(counts: Sequence[int]) -> List[float]:
    """log(beta(L)) / L for L >= 1."""
    return [math.log(c) / L for L, c in enumerate(counts) if L > 0]


def sample_words(rng, length: int) -> GroupWord:
    return GroupWord(tuple(rng.choice(LETTERS) for _ in range(length)))
