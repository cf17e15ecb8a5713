"""
errors
~~~~~~

Exceptions raised by :mod:`holoscope`. Every exception carries a
stable `code` that the command line reports.
"""


class HoloscopeError(Exception):
    """Base class for holoscope errors."""
    code = 'HoloscopeError'


# Configuration.
class ConfigError(HoloscopeError, ValueError):
    """A job configuration breaks its invariants."""
    code = 'ConfigError'


# Arithmetic.
class DomainViolation(HoloscopeError, ArithmeticError):
    """An argument ball touches a point where the function is
    undefined.
    """
    code = 'DomainViolation'


class PrecisionExhausted(HoloscopeError, ArithmeticError):
    """The precision cap was reached before a result was resolved."""
    code = 'PrecisionExhausted'


class ZeroPolynomial(HoloscopeError, ValueError):
    """An operation needs a polynomial that is not identically zero."""
    code = 'ZeroPolynomial'


class BaseNotPositive(HoloscopeError, ValueError):
    """An exponential base is not a positive rational."""
    code = 'BaseNotPositive'


# Recurrences.
class AllZero(HoloscopeError, ValueError):
    """Every coefficient of a recurrence is zero."""
    code = 'AllZero'


class OracleDomain(HoloscopeError, ValueError):
    """A sequence term is undefined or unavailable."""
    code = 'OracleDomain'

    def __init__(self, n: int, msg: str = '') -> None:
        self.n = n
        if not msg:
            msg = f'term {n} is not available'
        super().__init__(msg)


class SingularLeadingCoefficient(HoloscopeError, ArithmeticError):
    """The leading coefficient vanishes while unrolling."""
    code = 'SingularLeadingCoefficient'

    def __init__(self, n: int) -> None:
        self.n = n
        super().__init__(f'leading coefficient vanishes at n={n}')


class NullspaceEmpty(HoloscopeError, RuntimeError):
    """A closure ansatz found no relation within its order bound."""
    code = 'NullspaceEmpty'


class ZeroFunction(HoloscopeError, ValueError):
    """The function is identically zero."""
    code = 'ZeroFunction'


class NotAnnihilated(HoloscopeError, ValueError):
    """A recurrence fails on terms it was expected to annihilate."""
    code = 'NotAnnihilated'

    def __init__(self, n: int) -> None:
        self.n = n
        super().__init__(f'recurrence fails at n={n}')


class InsufficientTerms(HoloscopeError, ValueError):
    """Not enough terms were given to decide the question."""
    code = 'InsufficientTerms'


# Expressions.
class ParseError(HoloscopeError, ValueError):
    """The text does not follow the expression grammar."""
    code = 'SyntaxError'

    def __init__(self, position: int, expected: str) -> None:
        self.position = position
        self.expected = expected
        super().__init__(f'at position {position}: expected {expected}')


class UndeclaredConstant(HoloscopeError, ValueError):
    """The expression names a constant that was never declared."""
    code = 'UndeclaredConstant'

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f'undeclared constant {name!r}')


class UnsupportedDerivative(HoloscopeError, ValueError):
    """The node has no supported derivative."""
    code = 'UnsupportedDerivative'


class NotInClass(HoloscopeError, ValueError):
    """The expression is not of the form exp(r)*prod((x-a)^c)."""
    code = 'NotInClass'


class NotInRing(HoloscopeError, ValueError):
    """The expression is not a polynomial in shifted logarithms."""
    code = 'NotInRing'


class NotRadical(HoloscopeError, ValueError):
    """The expression is not built from radicals."""
    code = 'NotRadical'


class DependentBases(HoloscopeError, ValueError):
    """Exponential bases are multiplicatively dependent."""
    code = 'DependentBases'

    def __init__(self, exponents: tuple[int, ...]) -> None:
        self.exponents = exponents
        super().__init__(f'bases satisfy the relation {exponents}')


# Certificates.
class CoefficientZeroOnRay(HoloscopeError, RuntimeError):
    """A Rolle chain tried to divide by a zero coefficient."""
    code = 'CoefficientZeroOnRay'


# Input files.
class MalformedLine(HoloscopeError, ValueError):
    """A b-file line is not `n value`."""
    code = 'MalformedLine'

    def __init__(self, lineno: int, line: str = '') -> None:
        self.lineno = lineno
        super().__init__(f'line {lineno}: cannot read {line!r}')


class NonContiguousIndex(HoloscopeError, ValueError):
    """A b-file skips or repeats an index."""
    code = 'NonContiguousIndex'

    def __init__(self, n: int) -> None:
        self.n = n
        super().__init__(f'index {n} does not follow the previous line')
