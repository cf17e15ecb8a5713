"""
parser
~~~~~~

Reading expressions, recurrences and constant declarations from
text.

Expression grammar::

    <EXPR>  -> <TERM> { ( '+' | '-' ) <TERM> }*
    <TERM>  -> <UNARY> { ( '*' | '/' ) <UNARY> }*
    <UNARY> -> '-' <UNARY> | <POWER>
    <POWER> -> <ATOM> [ ( '^' | '**' ) <UNARY> ]
    <ATOM>  -> NUMBER | NAME | NAME '(' <EXPR> ')' | '(' <EXPR> ')'
"""
import re
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

import sympy
from sympy.core.sympify import SympifyError

from holoscope import expr as ex
from holoscope.errors import ParseError, UndeclaredConstant
from holoscope.polyring import N, QQ_FIELD, Constant, ConstField
from holoscope.recurrence import Recurrence, make_recurrence


# Tokens.
class Token(NamedTuple):
    kind: str
    text: str
    position: int


TOKENS = (
    ('NUMBER', r'\d+'),
    ('NAME', r'[A-Za-z_][A-Za-z_0-9]*'),
    ('POW', r'\*\*|\^'),
    ('OP', r'[-+*/(),]'),
    ('SPACE', r'\s+'),
)
PATTERN = re.compile('|'.join(f'(?P<{kind}>{rx})' for kind, rx in TOKENS))
UNARY_FUNCTIONS = {
    'log': ex.Log,
    'exp': ex.Exp,
    'sin': ex.Sin,
    'cos': ex.Cos,
    'atan': ex.Atan,
    'gamma': ex.Gamma,
}


def tokenize(text: str) -> list[Token]:
    """Split the text into tokens, dropping whitespace. The list ends
    with an empty END token.

    Usage:

        >>> [t.text for t in tokenize('2*x^(1/2)')]
        ['2', '*', 'x', '^', '(', '1', '/', '2', ')', '']
    """
    tokens = []
    position = 0
    while position < len(text):
        match = PATTERN.match(text, position)
        if match is None:
            raise ParseError(position, 'a number, name or operator')
        if match.lastgroup != 'SPACE':
            kind = match.lastgroup
            if kind == 'POW':
                tokens.append(Token('OP', '^', position))
            else:
                tokens.append(Token(kind, match.group(), position))
        position = match.end()
    tokens.append(Token('END', '', len(text)))
    return tokens


# Expressions.
class Parser:
    """A recursive descent parser for closed forms.

    :param text: The expression text.
    :param constants: The names of declared constants.
    :param var: The name of the variable.
    """
    def __init__(
        self,
        text: str,
        constants: Iterable[str] = (),
        var: str = 'x'
    ) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.constants = set(constants) | set(ex.BUILTIN_CONSTANTS)
        self.var = var

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def peek(self, text: str) -> bool:
        return self.token.kind == 'OP' and self.token.text == text

    def accept(self, text: str) -> bool:
        if self.peek(text):
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        token = self.token
        if not self.accept(text):
            raise ParseError(token.position, repr(text))
        return token

    def parse(self) -> ex.Expr:
        result = self._expr()
        if self.token.kind != 'END':
            raise ParseError(self.token.position, 'an operator or the end')
        return result

    # <EXPR> -> <TERM> { ( '+' | '-' ) <TERM> }*
    def _expr(self) -> ex.Expr:
        result = self._term()
        while True:
            if self.accept('+'):
                result = ex.add(result, self._term())
            elif self.accept('-'):
                result = ex.sub(result, self._term())
            else:
                return result

    # <TERM> -> <UNARY> { ( '*' | '/' ) <UNARY> }*
    def _term(self) -> ex.Expr:
        result = self._unary()
        while True:
            if self.accept('*'):
                result = ex.mul(result, self._unary())
            elif self.peek('/'):
                position = self.token.position
                self.index += 1
                right = self._unary()
                try:
                    result = ex.div(result, right)
                except ZeroDivisionError:
                    raise ParseError(position + 1, 'a nonzero divisor')
            else:
                return result

    # <UNARY> -> '-' <UNARY> | <POWER>
    def _unary(self) -> ex.Expr:
        if self.accept('-'):
            return ex.neg(self._unary())
        return self._power()

    # <POWER> -> <ATOM> [ '^' <UNARY> ]
    def _power(self) -> ex.Expr:
        base = self._atom()
        if not self.peek('^'):
            return base
        self.index += 1
        position = self.token.position
        exponent = self._unary()
        if not isinstance(exponent, ex.Num):
            if base == ex.Const('e'):
                return ex.Exp(exponent)
            return ex.Exp(ex.mul(exponent, ex.Log(base)))
        if isinstance(base, ex.Num) and not base.value and exponent.value < 0:
            raise ParseError(position, 'a nonnegative power of zero')
        return ex.power(base, exponent.value)

    # <ATOM> -> NUMBER | NAME | NAME '(' <EXPR> ')' | '(' <EXPR> ')'
    def _atom(self) -> ex.Expr:
        token = self.token
        if token.kind == 'NUMBER':
            self.index += 1
            return ex.num(int(token.text))
        if self.accept('('):
            result = self._expr()
            self.expect(')')
            return result
        if token.kind == 'NAME':
            self.index += 1
            return self._name(token)
        raise ParseError(token.position, 'a number, name or parenthesis')

    def _name(self, token: Token) -> ex.Expr:
        name = token.text
        if name == self.var:
            return ex.Var()
        if name in UNARY_FUNCTIONS or name in ('sqrt', 'zeta'):
            self.expect('(')
            position = self.token.position
            arg = self._expr()
            self.expect(')')
            if name == 'sqrt':
                return ex.power(arg, Fraction(1, 2))
            if name == 'zeta':
                return self._zeta(arg, position)
            return UNARY_FUNCTIONS[name](arg)
        if name in self.constants:
            return ex.Const(name)
        raise UndeclaredConstant(name)

    def _zeta(self, arg: ex.Expr, position: int) -> ex.Zeta:
        """Read a zeta argument a*x + b with a in {1, 2}."""
        try:
            value = sympy.Poly(ex.to_sympy(arg), sympy.Symbol('x'))
        except sympy.PolynomialError:
            raise ParseError(position, 'an argument a*x + b with a in {1, 2}')
        coeffs = value.all_coeffs() if value.degree() == 1 else []
        if (
            ex.const_names(arg)
            or len(coeffs) != 2
            or not all(c.is_Integer for c in coeffs)
            or coeffs[0] not in (1, 2)
        ):
            raise ParseError(position, 'an argument a*x + b with a in {1, 2}')
        return ex.Zeta(int(coeffs[0]), int(coeffs[1]))


def parse(
    text: str,
    constants: Iterable[str] = (),
    var: str = 'x'
) -> ex.Expr:
    """Parse an expression.

    :param text: The expression text.
    :param constants: The names of declared constants.
    :param var: The name of the variable.
    :return: The expression tree.
    :rtype: holoscope.expr.Expr

    Usage:

        >>> parse('log(x)/(x+1)')
        Div(left=Log(arg=Var()), right=Add(left=Var(), right=Num(1)))
        >>> parse('x^(1/2)')
        Pow(base=Var(), exponent=Fraction(1, 2))
    """
    if not text.strip():
        raise ParseError(0, 'an expression')
    return Parser(text, constants, var).parse()


# Constant declarations.
def parse_declaration(text: str) -> tuple[str, str]:
    """Split a `NAME[=VALUE]` declaration.

    Usage:

        >>> parse_declaration('a = pi/4')
        ('a', 'pi/4')
        >>> parse_declaration('b')
        ('b', '')
    """
    name, _, value = text.partition('=')
    name = name.strip()
    if not re.fullmatch(TOKENS[1][1], name):
        raise ParseError(0, 'a constant name')
    if name in ex.BUILTIN_CONSTANTS or name in ex.FUNCTIONS or name == 'x':
        raise ParseError(0, f'a name other than {name!r}')
    return name, value.strip()


def make_cfield(declarations: Sequence[tuple[str, str]]) -> ConstField:
    """Build the constant field for declared constants.

    A value may use pi, e and constants declared before it. A
    declaration without a value is purely symbolic.

    :param declarations: (name, value text) pairs.
    :return: The field.
    :rtype: holoscope.polyring.ConstField
    """
    cfield = QQ_FIELD
    for name, text in declarations:
        rule = None
        if text:
            known = [c.name for c in cfield.constants]
            value = parse(text, known, var='')
            if ex.has_var(value):
                raise ParseError(0, f'a value for {name} without x')
            rule = ex.constant_rule(value, cfield)
        cfield = cfield.join(ConstField((Constant(name, rule),)))
    return cfield


# Recurrences.
def parse_recurrence(
    text: str,
    cfield: ConstField = QQ_FIELD,
    valid_from: Optional[int] = None
) -> Recurrence:
    """Read a recurrence written as `p0, p1, ..., pd [@ n0]`.

    Each p_k is a polynomial in n over the constant field.

    Usage:

        >>> str(parse_recurrence('-2, 1'))
        '-2, 1 @ 1'
        >>> str(parse_recurrence('n+1, -(2*n+3), n+2 @ 2'))
        'n + 1, -2*n - 3, n + 2 @ 2'
    """
    body, at, start = text.partition('@')
    if at:
        try:
            valid_from = int(start.strip())
        except ValueError:
            raise ParseError(len(body) + 1, 'an integer start index')
    if valid_from is None:
        valid_from = 1
    names = {c.name: c.symbol for c in cfield.constants}
    names['n'] = N
    coeffs = []
    position = 0
    for part in body.split(','):
        if not part.strip():
            raise ParseError(position, 'a coefficient')
        try:
            value = sympy.sympify(part.replace('^', '**'), locals=names)
        except (SympifyError, SyntaxError, TypeError):
            raise ParseError(position, 'a polynomial in n')
        stray = value.free_symbols - set(names.values())
        if stray:
            raise UndeclaredConstant(sorted(str(s) for s in stray)[0])
        if not value.is_polynomial(N):
            raise ParseError(position, 'a polynomial in n')
        coeffs.append(value)
        position += len(part) + 1
    return make_recurrence(coeffs, valid_from, cfield)
