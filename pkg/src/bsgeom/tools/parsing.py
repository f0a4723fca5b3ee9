"""
Literal Parsing

Convert the text forms used on the command line and in tool calls into exact
objects: rationals, n-adic streams, clones and integer matrices.
"""

import json
from fractions import Fraction
from typing import List, Union

from bsgeom.errors import BaseMismatchError
from bsgeom.nadic import Clone, NAdic


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse an exact rational.

    Args:
        text: "3", "-7/4" or a terminating decimal such as "0.125"

    Returns:
        The value as a Fraction

    Examples:
        "-7/4" -> Fraction(-7, 4)
        "0.125" -> Fraction(1, 8)
    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not an exact rational: {text!r}") from e


def parse_nadic(text: str, n: int) -> NAdic:
    """
    Parse an element of Q_n.

    Args:
        text: A literal "n:low:preperiod|period", or any rational (every rational embeds in Q_n)
        n: Expected base

    Returns:
        The n-adic stream

    Examples:
        "2:0:1|0" -> 1 in Q_2
        "-1" -> the stream of period (1) in Q_2
    """
    text = text.strip()
    if text.count(":") == 2 and "|" in text:
        x = NAdic.parse(text)
        if x.n != n:
            raise BaseMismatchError(x.n, n)
        return x
    return NAdic.from_fraction(parse_rational(text), n)


def parse_clone(text: str, n: int) -> Clone:
    """Parse "Z" or a clone label "k:low:digits"."""
    return Clone.parse(text, n)


def parse_matrix(text: str) -> List[List[int]]:
    """
    Parse a square integer matrix written as JSON, e.g. "[[2,1],[0,3]]".

    Raises:
        ValueError: If the text is not a nonempty square integer matrix
    """
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"matrix is not valid JSON: {text!r}") from e
    if not rows or not all(isinstance(r, list) and len(r) == len(rows) for r in rows):
        raise ValueError("matrix must be a nonempty square list of rows")
    if not all(isinstance(v, int) for r in rows for v in r):
        raise ValueError("matrix entries must be integers")
    return rows
