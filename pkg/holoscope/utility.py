"""
utility
~~~~~~~

Utility functions for holoscope.
"""
from fractions import Fraction
from typing import Sequence, TypeVar

import yadr


# Types.
T = TypeVar('T')


# Random number generation.
def roll(yadn: str) -> int:
    """Provide a random number based on the given dice notation."""
    result = yadr.roll(yadn)
    if not isinstance(result, int):
        rtype = type(result).__name__
        msg = ('YADN passed to holoscope.utility.roll can only return '
               f'an int. Received type: {rtype}')
        raise ValueError(msg)
    return result


def roll_between(lo: int, hi: int) -> int:
    """Roll an integer uniformly from the closed range [lo, hi].

    :param lo: The smallest result.
    :param hi: The largest result.
    :return: The rolled value.
    :rtype: int
    """
    if hi < lo:
        msg = f'Empty range [{lo}, {hi}].'
        raise ValueError(msg)
    if hi == lo:
        return lo
    return lo - 1 + roll(f'1d{hi - lo + 1}')


def roll_choice(items: Sequence[T]) -> T:
    """Pick one of the items at random."""
    return items[roll_between(0, len(items) - 1)]


def roll_fraction(bound: int, den_bound: int = 4) -> Fraction:
    """Roll a small rational with numerator in [-bound, bound] and
    denominator in [1, den_bound].
    """
    num = roll_between(-bound, bound)
    den = roll_between(1, den_bound)
    return Fraction(num, den)


# Formatting.
def format_fraction(value: Fraction) -> str:
    """Write a rational as `p` or `p/q`.

    Usage:

        >>> format_fraction(Fraction(3, 2))
        '3/2'
        >>> format_fraction(Fraction(4))
        '4'
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def parse_fraction(text: str) -> Fraction:
    """Read a rational written as `p` or `p/q`.

    Usage:

        >>> parse_fraction('11/6')
        Fraction(11, 6)
    """
    text = text.strip()
    if not text:
        msg = 'Empty rational.'
        raise ValueError(msg)
    return Fraction(text)
