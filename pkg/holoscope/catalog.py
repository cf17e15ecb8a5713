"""
catalog
~~~~~~~

Built-in sequences, for the falsifier and for regression runs.
Closed forms carry their expression text; exact sequences and
interlacements are built from oracles directly.
"""
from fractions import Fraction
from typing import Callable, NamedTuple

from holoscope.expr import ExprOracle
from holoscope.parser import parse
from holoscope.recurrence import FunctionOracle, InterlaceOracle, SeqOracle


# Types.
class CatalogEntry(NamedTuple):
    """A built-in sequence.

    :param key: The id, `family.name`.
    :param description: What the sequence is.
    :param text: The closed form, or empty when there is none.
    :param build: Makes a fresh oracle for the sequence.
    """
    key: str
    description: str
    text: str
    build: Callable[[], SeqOracle]


catalog: dict[str, CatalogEntry] = {}


class catalog_sequence:
    """A decorator that registers an oracle factory in the catalog."""
    def __init__(self, key: str, description: str, text: str = '') -> None:
        self.key = key
        self.description = description
        self.text = text

    def __call__(self, fn: Callable[[], SeqOracle]) -> Callable[[], SeqOracle]:
        entry = CatalogEntry(self.key, self.description, self.text, fn)
        catalog[self.key] = entry
        return fn


def closed_form(key: str, description: str, text: str) -> None:
    """Register a sequence f(n) given by an expression."""
    @catalog_sequence(key, description, text)
    def build() -> SeqOracle:
        return ExprOracle(parse(text))


def get_entry(key: str) -> CatalogEntry:
    """Look up a built-in sequence.

    :param key: The id.
    :return: The entry.
    :rtype: holoscope.catalog.CatalogEntry

    Usage:

        >>> get_entry('field.log').text
        'log(x)'
    """
    try:
        return catalog[key]
    except KeyError:
        msg = f'No built-in sequence {key!r}. Try the catalog command.'
        raise KeyError(msg)


# Closed forms.
closed_form('field.log', 'log n', 'log(x)')
closed_form('field.arctan', 'arctan n', 'atan(x)')
closed_form(
    'field.mixed',
    'log n and sin over an exponential denominator',
    '(log(x) + sin(1/(x+1)))/(exp(x) + x^2 + 1)'
)
closed_form('growth.exp_sqrt', 'e to the square root of n', 'exp(sqrt(x))')
closed_form('growth.exp_inverse', 'e to the 1/n', 'exp(1/x)')
closed_form('growth.exp_exp_inverse', 'exp(exp(1/n))', 'exp(exp(1/x))')
closed_form('algebraic.sqrt', 'square root of n', 'sqrt(x)')
closed_form('gamma.sqrt_factorial', 'square root of n!', 'gamma(x+1)^(1/2)')
closed_form('power.self', 'n to the n', 'x^x')
closed_form('exp.reciprocal', '1/(2^n + 1)', '1/(2^x + 1)')
closed_form(
    'exp.dependent',
    'dependent bases 2 and 4 giving the constant 1',
    '1/(1 + 2^(2*x) - 4^x)'
)
closed_form(
    'exp.pole_accumulation',
    'poles of exp(n^2) quotients accumulate',
    '(exp(x^2) + 1)/(exp(x^2) - 1)'
)
closed_form('zeta.odd', 'zeta at the odd integers 2n+1', 'zeta(2*x+1)')
closed_form('exact.rational', '(n^2 + 1)/(n + 3)', '(x^2 + 1)/(x + 3)')


# Exact sequences.
@catalog_sequence('exact.harmonic', 'harmonic numbers H_n')
def harmonic() -> SeqOracle:
    values = [Fraction(0)]

    def term(n: int) -> Fraction:
        while len(values) <= n:
            values.append(values[-1] + Fraction(1, len(values)))
        return values[n]

    return FunctionOracle(term)


@catalog_sequence('exact.two_three', '2^n + 3^n')
def two_three() -> SeqOracle:
    return FunctionOracle(lambda n: 2 ** n + 3 ** n)


@catalog_sequence('exact.constant', 'the constant 1')
def constant() -> SeqOracle:
    return FunctionOracle(lambda n: 1)


# Interlacements.
@catalog_sequence('interlace.log_sqrt', 'log n and sqrt n, alternately')
def log_sqrt() -> SeqOracle:
    return InterlaceOracle([ExprOracle(parse('log(x)')), ExprOracle(parse('sqrt(x)'))])


__all__ = ['CatalogEntry', 'catalog', 'get_entry']
