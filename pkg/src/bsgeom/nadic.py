"""
n-adic Rationals

This module provides exact arithmetic and metric geometry of the ring Q_n of
n-adic rationals and of its clones (the closed balls of Q_n).

An element is stored as an eventually periodic digit stream
(low index, preperiod block, period block). Every rational number embeds in
Q_n and has exactly one such canonical stream, so ring operations go through
exact rational arithmetic and come back canonical.

Metric convention: d(x, y) = n^(-k) where k is the largest index with
x_i = y_i for all i <= k. This is n times the usual valuation metric
|x - y|_n, and d(x, x) = 0.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from bsgeom.errors import BaseMismatchError

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _check_base(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"base must be an integer >= 2, got {n!r}")


def _same_base(x: Any, y: Any) -> int:
    if x.n != y.n:
        raise BaseMismatchError(x.n, y.n)
    return x.n


def _primitive(block: Tuple[int, ...]) -> Tuple[int, ...]:
    length = len(block)
    for size in range(1, length + 1):
        if length % size == 0 and block[:size] * (length // size) == block:
            return block[:size]
    return block


def _canonical(
    n: int, low: int, preperiod: Tuple[int, ...], period: Tuple[int, ...]
) -> "NAdic":
    period = _primitive(period)
    # fold the preperiod into the period while they agree from the top
    while preperiod and preperiod[-1] == period[-1]:
        period = (preperiod[-1],) + period[:-1]
        preperiod = preperiod[:-1]
    if period == (0,) and not any(preperiod):
        return NAdic(n, 0, (), (0,))
    while True:
        first = preperiod[0] if preperiod else period[0]
        if first != 0:
            break
        if preperiod:
            preperiod = preperiod[1:]
        else:
            period = period[1:] + period[:1]
        low += 1
    return NAdic(n, low, preperiod, period)


@dataclass(frozen=True)
class NAdic:
    """An element of Q_n as an eventually periodic digit stream.

    Digit i (for i >= low) is preperiod[i - low] while inside the preperiod and
    then cycles through period. Digits below low are zero. Terminating
    expansions have period (0,). Instances built through the constructors
    below are canonical, so == is value equality.
    """

    n: int
    low: int
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self) -> None:
        _check_base(self.n)
        if not self.period:
            raise ValueError("period block must be non-empty")
        for d in self.preperiod + self.period:
            if not 0 <= d < self.n:
                raise ValueError(f"digit {d} out of range for base {self.n}")

    # construction

    @classmethod
    def zero(cls, n: int) -> "NAdic":
        return cls(n, 0, (), (0,))

    @classmethod
    def from_fraction(cls, value: Rational, n: int) -> "NAdic":
        """Expand a rational number as an n-adic digit stream."""
        _check_base(n)
        q = Fraction(value)
        if q == 0:
            return cls.zero(n)
        u, v = q.numerator, q.denominator
        # v = v1 * v2 with v1 built from primes of n and gcd(v2, n) = 1
        v1, v2 = 1, v
        g = gcd(v2, n)
        while g > 1:
            v2 //= g
            v1 *= g
            g = gcd(v2, n)
        j, power = 0, 1
        while power % v1:
            power *= n
            j += 1
        state = u * (power // v1)
        inverse = pow(v2, -1, n)
        digits: List[int] = []
        seen: Dict[int, int] = {}
        while state not in seen:
            seen[state] = len(digits)
            d = (state * inverse) % n
            digits.append(d)
            state = (state - d * v2) // n
        start = seen[state]
        return _canonical(n, -j, tuple(digits[:start]), tuple(digits[start:]))

    @classmethod
    def from_digits(
        cls, n: int, low: int, preperiod: Sequence[int], period: Sequence[int] = (0,)
    ) -> "NAdic":
        """Build the canonical form of an arbitrary stream description."""
        _check_base(n)
        pre = tuple(int(d) for d in preperiod)
        per = tuple(int(d) for d in period) or (0,)
        for d in pre + per:
            if not 0 <= d < n:
                raise ValueError(f"digit {d} out of range for base {n}")
        return _canonical(n, low, pre, per)

    @classmethod
    def parse(cls, text: str) -> "NAdic":
        """Parse the textual form "base:low:preperiod|period"."""
        try:
            base_text, low_text, blocks = text.strip().split(":", 2)
            pre_text, per_text = blocks.split("|")
            n = int(base_text)
            low = int(low_text)
        except ValueError as e:
            raise ValueError(f"malformed n-adic literal {text!r}") from e
        return cls.from_digits(n, low, _parse_block(pre_text, n), _parse_block(per_text, n))

    # conversion

    def to_fraction(self) -> Fraction:
        """The rational number whose n-adic expansion this stream is."""
        n = self.n
        head = sum(d * n**i for i, d in enumerate(self.preperiod))
        cycle = sum(d * n**i for i, d in enumerate(self.period))
        value = Fraction(head) + Fraction(n ** len(self.preperiod) * cycle, 1 - n ** len(self.period))
        return value * Fraction(n) ** self.low

    def to_string(self) -> str:
        return f"{self.n}:{self.low}:{_format_block(self.preperiod, self.n)}|{_format_block(self.period, self.n)}"

    def __str__(self) -> str:
        return self.to_string()

    # digits

    def digit(self, i: int) -> int:
        """The digit at index i."""
        if i < self.low:
            return 0
        offset = i - self.low
        if offset < len(self.preperiod):
            return self.preperiod[offset]
        return self.period[(offset - len(self.preperiod)) % len(self.period)]

    def digits(self, start: int, stop: int) -> Tuple[int, ...]:
        """Digits for indices start..stop inclusive."""
        return tuple(self.digit(i) for i in range(start, stop + 1))

    @property
    def is_zero(self) -> bool:
        return self.preperiod == () and self.period == (0,)

    @property
    def is_terminating(self) -> bool:
        """True for elements of Z[1/n] (finitely many nonzero digits)."""
        return self.period == (0,)

    @property
    def stable_index(self) -> int:
        """First index from which the stream is purely periodic."""
        return self.low + len(self.preperiod)

    def in_integers(self) -> bool:
        """Membership in Z_n (no digits at negative indices)."""
        return self.is_zero or self.low >= 0

    # ring operations

    def _coerce(self, other: Any) -> "NAdic":
        if isinstance(other, NAdic):
            _same_base(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return NAdic.from_fraction(other, self.n)
        return NotImplemented

    def __add__(self, other: Any) -> "NAdic":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return NAdic.from_fraction(self.to_fraction() + other.to_fraction(), self.n)

    __radd__ = __add__

    def __neg__(self) -> "NAdic":
        return NAdic.from_fraction(-self.to_fraction(), self.n)

    def __sub__(self, other: Any) -> "NAdic":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return NAdic.from_fraction(self.to_fraction() - other.to_fraction(), self.n)

    def __rsub__(self, other: Any) -> "NAdic":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> "NAdic":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return NAdic.from_fraction(self.to_fraction() * other.to_fraction(), self.n)

    __rmul__ = __mul__

    def shift(self, k: int) -> "NAdic":
        """Multiply by n^k, which moves every digit up k places."""
        if self.is_zero:
            return self
        return NAdic(self.n, self.low + k, self.preperiod, self.period)


def _parse_block(text: str, n: int) -> Tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    if "," in text or n > len(_DIGIT_CHARS):
        return tuple(int(part) for part in text.split(","))
    return tuple(int(ch, 36) for ch in text)


def _format_block(block: Tuple[int, ...], n: int) -> str:
    if n > len(_DIGIT_CHARS):
        return ",".join(str(d) for d in block)
    return "".join(_DIGIT_CHARS[d] for d in block)


def nadic_from_rational(p: int, j: int, n: int) -> NAdic:
    """The element p / n^j of Z[1/n] as an n-adic stream."""
    return NAdic.from_fraction(Fraction(p) / Fraction(n) ** j, n)


def nadic_add(x: NAdic, y: NAdic) -> NAdic:
    _same_base(x, y)
    return x + y


def nadic_mul(x: NAdic, y: NAdic) -> NAdic:
    _same_base(x, y)
    return x * y


def nadic_neg(x: NAdic) -> NAdic:
    return -x


def agreement_index(x: NAdic, y: NAdic) -> Optional[int]:
    """Largest k with x_i = y_i for all i <= k, or None when x == y."""
    _same_base(x, y)
    if x == y:
        return None
    start = min(x.low, y.low)
    lx, ly = len(x.period), len(y.period)
    stop = max(x.stable_index, y.stable_index) + lx * ly // gcd(lx, ly)
    for i in range(start, stop + 1):
        if x.digit(i) != y.digit(i):
            return i - 1
    raise AssertionError("distinct canonical streams must differ")  # pragma: no cover


def nadic_dist(x: NAdic, y: NAdic) -> Fraction:
    """The digit-agreement distance n^(-k); zero iff x == y."""
    k = agreement_index(x, y)
    if k is None:
        return Fraction(0)
    return Fraction(x.n) ** (-k)


def random_nadic(rng: random.Random, n: int, spread: int = 6, max_period: int = 3) -> NAdic:
    """A random element with a short (possibly repeating) stream."""
    low = rng.randint(-spread, spread)
    preperiod = [rng.randrange(n) for _ in range(rng.randint(0, spread))]
    if rng.random() < 0.5:
        period = [0]
    else:
        period = [rng.randrange(n) for _ in range(rng.randint(1, max_period))]
    return NAdic.from_digits(n, low, preperiod, period)


# clones


class CloneRelation(str, Enum):
    """How two clones sit relative to each other. There is no overlap case."""

    DISJOINT = "Disjoint"
    EQUAL = "Equal"
    PROPER_SUB = "ProperSub"
    PROPER_SUPER = "ProperSuper"


@dataclass(frozen=True)
class Clone:
    """The clone C_eta: all elements whose digits agree with eta up to index k.

    A clone is both a closed ball of radius n^(-k) and a vertex of T_n, with
    combinatorial height k. The prefix is stored as the digits for indices
    low..k with the first one nonzero; an all-zero prefix is stored empty
    with low = k + 1.
    """

    n: int
    k: int
    low: int
    prefix: Tuple[int, ...]

    def __post_init__(self) -> None:
        _check_base(self.n)
        if self.prefix:
            if self.prefix[0] == 0:
                raise ValueError("clone prefix must be stored without leading zeros")
            if self.low + len(self.prefix) - 1 != self.k:
                raise ValueError("clone prefix length disagrees with its height")
        elif self.low != self.k + 1:
            raise ValueError("empty clone prefix must have low = k + 1")
        for d in self.prefix:
            if not 0 <= d < self.n:
                raise ValueError(f"digit {d} out of range for base {self.n}")

    @classmethod
    def from_prefix(cls, n: int, k: int, low: int, digits: Sequence[int]) -> "Clone":
        """Normalise a prefix given for indices low..k (missing digits are zero)."""
        _check_base(n)
        digits = list(digits)
        if low + len(digits) - 1 > k:
            raise ValueError("prefix extends beyond the clone height")
        # pad to reach k
        digits = digits + [0] * (k - (low + len(digits) - 1))
        while digits and digits[0] == 0:
            digits.pop(0)
            low += 1
        if not digits:
            return cls(n, k, k + 1, ())
        return cls(n, k, low, tuple(digits))

    @classmethod
    def parse(cls, text: str, n: int) -> "Clone":
        """Read "Z" (the clone Z_n) or a label "k:low:digits" with base-36 digit characters."""
        text = text.strip()
        if text == "Z":
            return cls.integers(n)
        try:
            k, low, digits = text.split(":")
            return cls.from_prefix(n, int(k), int(low), [int(ch, 36) for ch in digits])
        except ValueError as e:
            raise ValueError(f"malformed clone label {text!r}") from e

    @classmethod
    def integers(cls, n: int) -> "Clone":
        """The clone Z_n: every digit at a negative index is zero, so height -1."""
        return cls(n, -1, 0, ())

    @property
    def height(self) -> int:
        """Combinatorial height h_c."""
        return self.k

    @property
    def radius(self) -> Fraction:
        return Fraction(self.n) ** (-self.k)

    def digit(self, i: int) -> int:
        if i > self.k:
            raise IndexError(f"index {i} above clone height {self.k}")
        if i < self.low:
            return 0
        return self.prefix[i - self.low]

    @property
    def center(self) -> Fraction:
        """The element of Z[1/n] whose digits are the prefix and zero above k."""
        return sum(
            (Fraction(d) * Fraction(self.n) ** (self.low + i) for i, d in enumerate(self.prefix)),
            Fraction(0),
        )

    def center_nadic(self) -> NAdic:
        return NAdic.from_fraction(self.center, self.n)

    def contains(self, x: NAdic) -> bool:
        """Membership: x agrees with the prefix at every index <= k."""
        _same_base(self, x)
        start = min(x.low, self.low)
        return all(x.digit(i) == self.digit(i) for i in range(start, self.k + 1))

    def truncate(self, k: int) -> "Clone":
        """The ancestor clone of height k <= self.k."""
        if k > self.k:
            raise ValueError(f"cannot truncate height {self.k} clone to height {k}")
        if k < self.low:
            return Clone(self.n, k, k + 1, ())
        return Clone.from_prefix(self.n, k, self.low, self.prefix[: k - self.low + 1])

    def contains_clone(self, other: "Clone") -> bool:
        _same_base(self, other)
        return other.k >= self.k and other.truncate(self.k) == self

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "k": self.k, "low": self.low, "prefix": list(self.prefix)}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Clone":
        return cls.from_prefix(int(data["n"]), int(data["k"]), int(data["low"]), data["prefix"])

    def __str__(self) -> str:
        digits = "".join(_DIGIT_CHARS[d] for d in self.prefix) if self.n <= 36 else ",".join(map(str, self.prefix))
        return f"C[{self.n}:{self.low}..{self.k}:{digits}]"


def clone_containing(x: NAdic, k: int) -> Clone:
    """The clone of combinatorial height k containing x (the closed ball of radius n^-k)."""
    if x.is_zero or x.low > k:
        return Clone(x.n, k, k + 1, ())
    return Clone.from_prefix(x.n, k, x.low, x.digits(x.low, k))


def clone_relation(c: Clone, d: Clone) -> CloneRelation:
    """Classify two clones as disjoint, equal or nested."""
    _same_base(c, d)
    if c.k <= d.k:
        if d.truncate(c.k) != c:
            return CloneRelation.DISJOINT
        return CloneRelation.EQUAL if c.k == d.k else CloneRelation.PROPER_SUPER
    if c.truncate(d.k) != d:
        return CloneRelation.DISJOINT
    return CloneRelation.PROPER_SUB


def random_clone(rng: random.Random, n: int, k_min: int = -6, k_max: int = 6) -> Clone:
    k = rng.randint(k_min, k_max)
    low = rng.randint(k_min - 2, k)
    return Clone.from_prefix(n, k, low, [rng.randrange(n) for _ in range(k - low + 1)])


# finite precision windows


@dataclass(frozen=True)
class NAdicWindow:
    """A generic element of Q_n known through the digits at indices lo..hi.

    Digits below lo are zero; digits above hi are unknown. A window is
    therefore the clone of height hi containing any of its completions, and
    all operations report the index up to which their result is known.
    """

    n: int
    lo: int
    hi: int
    digits: Tuple[int, ...]

    def __post_init__(self) -> None:
        _check_base(self.n)
        if self.hi < self.lo - 1 or len(self.digits) != self.hi - self.lo + 1:
            raise ValueError("window digits must cover lo..hi exactly")
        for d in self.digits:
            if not 0 <= d < self.n:
                raise ValueError(f"digit {d} out of range for base {self.n}")

    @classmethod
    def from_value(cls, value: Fraction, n: int, lo: int, hi: int) -> "NAdicWindow":
        x = NAdic.from_fraction(value, n)
        if not x.is_zero and x.low < lo:
            raise ValueError(f"value has digits below the window start {lo}")
        return cls(n, lo, hi, x.digits(lo, hi))

    @classmethod
    def from_nadic(cls, x: NAdic, hi: int, lo: Optional[int] = None) -> "NAdicWindow":
        start = min(x.low, hi) if lo is None else lo
        if not x.is_zero and x.low < start:
            raise ValueError(f"element has digits below the window start {start}")
        return cls(x.n, start, hi, x.digits(start, hi))

    @classmethod
    def random(cls, rng: random.Random, n: int, lo: int, hi: int) -> "NAdicWindow":
        return cls(n, lo, hi, tuple(rng.randrange(n) for _ in range(hi - lo + 1)))

    def digit(self, i: int) -> int:
        if i > self.hi:
            raise IndexError(f"digit {i} lies above the known window (hi={self.hi})")
        if i < self.lo:
            return 0
        return self.digits[i - self.lo]

    def truncation(self) -> Fraction:
        """The representative with all unknown digits set to zero."""
        return sum(
            (Fraction(d) * Fraction(self.n) ** (self.lo + i) for i, d in enumerate(self.digits)),
            Fraction(0),
        )

    def to_nadic(self) -> NAdic:
        return NAdic.from_fraction(self.truncation(), self.n)

    def as_clone(self) -> Clone:
        return Clone.from_prefix(self.n, self.hi, self.lo, self.digits)

    @property
    def valuation(self) -> Optional[int]:
        """Index of the lowest nonzero known digit."""
        for i, d in enumerate(self.digits):
            if d:
                return self.lo + i
        return None

    def _reduced(self, value: Fraction, lo: int, hi: int) -> "NAdicWindow":
        modulus = Fraction(self.n) ** (hi + 1)
        scaled = value / modulus
        value = value - modulus * (scaled.numerator // scaled.denominator)
        return NAdicWindow.from_value(value, self.n, lo, hi)

    def __add__(self, other: "NAdicWindow") -> "NAdicWindow":
        _same_base(self, other)
        lo, hi = min(self.lo, other.lo), min(self.hi, other.hi)
        return self._reduced(self.truncation() + other.truncation(), lo, hi)

    def __neg__(self) -> "NAdicWindow":
        return self._reduced(-self.truncation(), self.lo, self.hi)

    def __mul__(self, other: "NAdicWindow") -> "NAdicWindow":
        _same_base(self, other)
        vx, vy = self.valuation, other.valuation
        if vx is None or vy is None:
            # one factor is only known to be small
            hi = min(self.hi + (other.lo if vy is None else vy), other.hi + (self.lo if vx is None else vx))
            lo = self.lo + other.lo
            return NAdicWindow(self.n, lo, max(hi, lo - 1), (0,) * max(0, hi - lo + 1))
        hi = min(vx + other.hi, vy + self.hi)
        lo = self.lo + other.lo
        return self._reduced(self.truncation() * other.truncation(), lo, hi)


def window_dist(x: NAdicWindow, y: NAdicWindow) -> Tuple[Fraction, bool]:
    """Distance between windows and whether it is exact.

    When the windows differ inside their common range the distance of any
    completions is exact; otherwise only the upper bound n^(-hi) is known.
    """
    _same_base(x, y)
    hi = min(x.hi, y.hi)
    for i in range(min(x.lo, y.lo), hi + 1):
        if x.digit(i) != y.digit(i):
            return Fraction(x.n) ** (1 - i), True
    return Fraction(x.n) ** (-hi), False
