"""
test_utility
~~~~~~~~~~~~

Unit tests for holoscope.utility.
"""
from fractions import Fraction

import pytest

from holoscope import utility as u


# Tests for roll.
def test_roll(mocker):
    """Dice notation is rolled through yadr."""
    mocker.patch('yadr.roll', return_value=4)
    assert u.roll('1d6') == 4


def test_roll_not_int(mocker):
    """Only integer results are accepted."""
    mocker.patch('yadr.roll', return_value=(1, 2))
    with pytest.raises(ValueError):
        u.roll('2d6')


def test_roll_between(mocker):
    """The roll is shifted into the range."""
    mocker.patch('yadr.roll', return_value=3)
    assert u.roll_between(-2, 2) == 0


def test_roll_between_single_value():
    """A range of one value needs no roll."""
    assert u.roll_between(5, 5) == 5


def test_roll_between_empty():
    """Empty ranges are an error."""
    with pytest.raises(ValueError):
        u.roll_between(2, 1)


def test_roll_choice(mocker):
    """Choices index the items from the roll."""
    mocker.patch('yadr.roll', return_value=2)
    assert u.roll_choice(['spam', 'eggs', 'bacon']) == 'eggs'


def test_roll_fraction(mocker):
    """Numerator and denominator are rolled in turn."""
    mocker.patch('yadr.roll', side_effect=[1, 3])
    assert u.roll_fraction(2) == Fraction(-2, 3)


# Tests for formatting.
def test_format_fraction():
    """Integers drop the denominator."""
    assert u.format_fraction(Fraction(3, 2)) == '3/2'
    assert u.format_fraction(Fraction(-4)) == '-4'


def test_parse_fraction():
    """Fractions read back from their text."""
    assert u.parse_fraction(' 11/6 ') == Fraction(11, 6)
    assert u.parse_fraction('-7') == Fraction(-7)


def test_parse_fraction_bad():
    """Empty and malformed text is an error."""
    for text in ('', 'spam', '1/0x'):
        with pytest.raises(ValueError):
            u.parse_fraction(text)
