"""
expr
~~~~

Closed-form expression trees for f(x): construction with rational
leaf folding, printing, shifting, differentiation, certified
evaluation and the closed-form sequence oracle.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import singledispatch
from typing import Callable, Optional, Union

import sympy

from holoscope.constants import GUARD_BITS
from holoscope.errors import (
    DomainViolation,
    OracleDomain,
    UnsupportedDerivative
)
from holoscope.exactnum import (
    Ball,
    ball_apply,
    check_prec,
    e_ball,
    gamma_ball,
    pi_ball,
    zeta_ball
)
from holoscope.polyring import QQ_FIELD, X, ConstField, to_fraction, to_rational
from holoscope.recurrence import SeqOracle


# Common data.
BUILTIN_CONSTANTS = ('e', 'pi')
FUNCTIONS = ('log', 'exp', 'sin', 'cos', 'atan', 'sqrt', 'gamma', 'zeta')


# Nodes.
class Expr:
    """Base class for expression nodes."""
    prec = 5

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, repr=False)
class Var(Expr):
    """The variable x."""
    def __repr__(self) -> str:
        return 'Var()'


@dataclass(frozen=True, repr=False)
class Num(Expr):
    """A rational leaf."""
    value: Fraction

    def __repr__(self) -> str:
        return f'Num({self.value})'


@dataclass(frozen=True)
class Const(Expr):
    """A symbolic constant: `pi`, `e`, or a declared name."""
    name: str


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr
    prec = 1


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr
    prec = 1


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr
    prec = 2


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr
    prec = 2


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    prec = 3


@dataclass(frozen=True)
class Pow(Expr):
    """A power with a rational exponent in lowest terms."""
    base: Expr
    exponent: Fraction
    prec = 4


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Log(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Atan(Expr):
    arg: Expr


@dataclass(frozen=True)
class Gamma(Expr):
    arg: Expr


@dataclass(frozen=True)
class Zeta(Expr):
    """The Riemann zeta function at a*x + b."""
    a: int
    b: int


Unary = (Exp, Log, Sin, Cos, Atan, Gamma)
Binary = (Add, Sub, Mul, Div)
NAMES = {
    Exp: 'exp', Log: 'log', Sin: 'sin', Cos: 'cos',
    Atan: 'atan', Gamma: 'gamma',
}
SYMBOLS = {Add: '+', Sub: '-', Mul: '*', Div: '/'}
SYMPY_FUNCTIONS = {
    Exp: sympy.exp, Log: sympy.log, Sin: sympy.sin,
    Cos: sympy.cos, Atan: sympy.atan, Gamma: sympy.gamma,
}


# Smart constructors.
def num(value: Union[int, Fraction]) -> Num:
    return Num(Fraction(value))


def add(left: Expr, right: Expr) -> Expr:
    """Build a sum, folding rational leaves.

    Usage:

        >>> add(add(Var(), num(1)), num(2))
        Add(left=Var(), right=Num(3))
    """
    if isinstance(left, Num) and isinstance(right, Num):
        return Num(left.value + right.value)
    if isinstance(right, Num) and not right.value:
        return left
    if isinstance(left, Num) and not left.value:
        return right
    if (
        isinstance(right, Num)
        and isinstance(left, Add)
        and isinstance(left.right, Num)
    ):
        return add(left.left, Num(left.right.value + right.value))
    return Add(left, right)


def sub(left: Expr, right: Expr) -> Expr:
    if isinstance(left, Num) and isinstance(right, Num):
        return Num(left.value - right.value)
    if isinstance(right, Num) and not right.value:
        return left
    return Sub(left, right)


def mul(left: Expr, right: Expr) -> Expr:
    if isinstance(left, Num) and isinstance(right, Num):
        return Num(left.value * right.value)
    for a, b in ((left, right), (right, left)):
        if isinstance(a, Num):
            if not a.value:
                return Num(Fraction(0))
            if a.value == 1:
                return b
    return Mul(left, right)


def div(left: Expr, right: Expr) -> Expr:
    if isinstance(right, Num) and not right.value:
        msg = 'Division by the literal zero.'
        raise ZeroDivisionError(msg)
    if isinstance(left, Num) and isinstance(right, Num):
        return Num(left.value / right.value)
    if isinstance(right, Num) and right.value == 1:
        return left
    return Div(left, right)


def neg(arg: Expr) -> Expr:
    if isinstance(arg, Num):
        return Num(-arg.value)
    return Neg(arg)


def power(base: Expr, exponent: Union[int, Fraction]) -> Expr:
    exponent = Fraction(exponent)
    if exponent == 1:
        return base
    if not exponent:
        return Num(Fraction(1))
    if (
        isinstance(base, Num)
        and exponent.denominator == 1
        and (base.value or exponent > 0)
    ):
        return Num(base.value ** int(exponent))
    return Pow(base, exponent)


# Printing.
def _show_num(value: Fraction) -> str:
    if value.denominator == 1 and value >= 0:
        return str(value.numerator)
    if value.denominator == 1:
        return f'({value.numerator})'
    return f'({value.numerator}/{value.denominator})'


def _wrap(e: Expr, bound: int) -> str:
    text = show(e)
    return f'({text})' if e.prec < bound else text


def show(e: Expr) -> str:
    """Print an expression in the grammar parse reads.

    Usage:

        >>> show(div(Log(Var()), add(Var(), num(1))))
        'log(x)/(x + 1)'
        >>> show(Zeta(2, 1))
        'zeta(2*x + 1)'
    """
    if isinstance(e, Var):
        return 'x'
    if isinstance(e, Num):
        return _show_num(e.value)
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Binary):
        left = _wrap(e.left, e.prec)
        right = _wrap(e.right, e.prec + 1)
        symbol = SYMBOLS[type(e)]
        if symbol in '+-':
            return f'{left} {symbol} {right}'
        return f'{left}{symbol}{right}'
    if isinstance(e, Neg):
        return f'-{_wrap(e.arg, e.prec)}'
    if isinstance(e, Pow):
        return f'{_wrap(e.base, 5)}^{_show_num(e.exponent)}'
    if isinstance(e, Unary):
        return f'{NAMES[type(e)]}({show(e.arg)})'
    if isinstance(e, Zeta):
        linear = 'x' if e.a == 1 else f'{e.a}*x'
        if e.b > 0:
            linear = f'{linear} + {e.b}'
        elif e.b < 0:
            linear = f'{linear} - {-e.b}'
        return f'zeta({linear})'
    msg = f'Cannot print {e!r}.'
    raise TypeError(msg)


# Traversal.
def rebuild(e: Expr, children: tuple) -> Expr:
    """Rebuild a node from new children with the smart constructors."""
    if isinstance(e, Add):
        return add(*children)
    if isinstance(e, Sub):
        return sub(*children)
    if isinstance(e, Mul):
        return mul(*children)
    if isinstance(e, Div):
        return div(*children)
    if isinstance(e, Neg):
        return neg(*children)
    if isinstance(e, Pow):
        return power(children[0], e.exponent)
    if isinstance(e, Unary):
        return type(e)(*children)
    return e


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, (Neg,) + Unary):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base,)
    return ()


def walk(e: Expr):
    """Yield every node of the tree, parents first."""
    yield e
    for child in children(e):
        yield from walk(child)


def contains(e: Expr, kinds: Union[type, tuple]) -> bool:
    return any(isinstance(node, kinds) for node in walk(e))


def has_var(e: Expr) -> bool:
    return any(isinstance(node, (Var, Zeta)) for node in walk(e))


def const_names(e: Expr) -> set[str]:
    return {node.name for node in walk(e) if isinstance(node, Const)}


# Shifting.
def shift(e: Expr, k: int) -> Expr:
    """Substitute x + k for x.

    Usage:

        >>> shift(Zeta(2, 1), 1)
        Zeta(a=2, b=3)
    """
    if not k:
        return e
    if isinstance(e, Var):
        return add(Var(), num(k))
    if isinstance(e, Zeta):
        return Zeta(e.a, e.b + e.a * k)
    kids = children(e)
    if not kids:
        return e
    return rebuild(e, tuple(shift(child, k) for child in kids))


def substitute(e: Expr, value: Expr) -> Expr:
    """Substitute an expression for x. Zeta nodes need an affine
    integer substitution and are left alone otherwise.
    """
    if isinstance(e, Var):
        return value
    kids = children(e)
    if not kids:
        return e
    return rebuild(e, tuple(substitute(child, value) for child in kids))


# Differentiation.
@singledispatch
def differentiate(e: Expr) -> Expr:
    """The derivative with respect to x.

    Usage:

        >>> differentiate(Log(Var()))
        Div(left=Num(1), right=Var())
    """
    msg = f'Cannot differentiate {show(e)}.'
    raise UnsupportedDerivative(msg)


@differentiate.register(Var)
def _(e: Var) -> Expr:
    return num(1)


@differentiate.register(Num)
@differentiate.register(Const)
def _(e: Expr) -> Expr:
    return num(0)


@differentiate.register(Add)
def _(e: Add) -> Expr:
    return add(differentiate(e.left), differentiate(e.right))


@differentiate.register(Sub)
def _(e: Sub) -> Expr:
    return sub(differentiate(e.left), differentiate(e.right))


@differentiate.register(Mul)
def _(e: Mul) -> Expr:
    return add(
        mul(differentiate(e.left), e.right),
        mul(e.left, differentiate(e.right))
    )


@differentiate.register(Div)
def _(e: Div) -> Expr:
    top = sub(
        mul(differentiate(e.left), e.right),
        mul(e.left, differentiate(e.right))
    )
    return div(top, power(e.right, 2))


@differentiate.register(Neg)
def _(e: Neg) -> Expr:
    return neg(differentiate(e.arg))


@differentiate.register(Pow)
def _(e: Pow) -> Expr:
    outer = mul(num(e.exponent), power(e.base, e.exponent - 1))
    return mul(outer, differentiate(e.base))


@differentiate.register(Exp)
def _(e: Exp) -> Expr:
    return mul(e, differentiate(e.arg))


@differentiate.register(Log)
def _(e: Log) -> Expr:
    return div(differentiate(e.arg), e.arg)


@differentiate.register(Sin)
def _(e: Sin) -> Expr:
    return mul(Cos(e.arg), differentiate(e.arg))


@differentiate.register(Cos)
def _(e: Cos) -> Expr:
    return neg(mul(Sin(e.arg), differentiate(e.arg)))


@differentiate.register(Atan)
def _(e: Atan) -> Expr:
    return div(differentiate(e.arg), add(num(1), power(e.arg, 2)))


@differentiate.register(Gamma)
def _(e: Gamma) -> Expr:
    msg = 'The derivative of gamma is not supported.'
    raise UnsupportedDerivative(msg)


@differentiate.register(Zeta)
def _(e: Zeta) -> Expr:
    msg = 'The derivative of zeta is not supported.'
    raise UnsupportedDerivative(msg)


# Conversion to sympy.
def to_sympy(
    e: Expr,
    var: sympy.Symbol = X,
    symbolic: bool = False,
    hook: Optional[Callable[[Expr], Optional[sympy.Expr]]] = None
) -> sympy.Expr:
    """Convert an expression into a sympy expression in `var`.

    :param e: The expression.
    :param var: The symbol standing for x.
    :param symbolic: Whether `pi` and `e` become positive symbols like
        the declared constants instead of sympy's constants.
    :param hook: (Optional.) A function tried on every node first.
        When it returns a value, that value replaces the node.
    :return: The sympy expression.
    :rtype: sympy.Expr
    """
    if hook is not None:
        replaced = hook(e)
        if replaced is not None:
            return replaced
    if isinstance(e, Var):
        return var
    if isinstance(e, Num):
        return to_rational(e.value)
    if isinstance(e, Const):
        if e.name == 'pi' and not symbolic:
            return sympy.pi
        if e.name == 'e' and not symbolic:
            return sympy.E
        return sympy.Symbol(e.name, positive=True)
    if isinstance(e, Zeta):
        return sympy.zeta(e.a * var + e.b)
    args = [to_sympy(child, var, symbolic, hook) for child in children(e)]
    if isinstance(e, Add):
        return args[0] + args[1]
    if isinstance(e, Sub):
        return args[0] - args[1]
    if isinstance(e, Mul):
        return args[0] * args[1]
    if isinstance(e, Div):
        return args[0] / args[1]
    if isinstance(e, Neg):
        return -args[0]
    if isinstance(e, Pow):
        return args[0] ** to_rational(e.exponent)
    return SYMPY_FUNCTIONS[type(e)](args[0])


# Evaluation.
def constant_rule(value: Expr, cfield: ConstField = QQ_FIELD) -> Callable[[int], Ball]:
    """A ball rule for a constant given by a closed form without x."""
    def rule(prec: int) -> Ball:
        return eval_ball(value, 0, prec, cfield)
    return rule


def constant_ball(name: str, prec: int, cfield: ConstField) -> Ball:
    """A ball for a named constant."""
    if name == 'pi':
        return pi_ball(prec)
    if name == 'e':
        return e_ball(prec)
    rule = cfield.rule(name)
    if rule is None:
        msg = f'The constant {name} has no numeric value.'
        raise DomainViolation(msg)
    return rule(prec)


def eval_ball(
    e: Expr,
    n: Union[int, Fraction, Ball],
    prec: int = 64,
    cfield: ConstField = QQ_FIELD
) -> Ball:
    """Enclose f(n) in a ball.

    :param e: The expression.
    :param n: The point, exact or as a ball.
    :param prec: The working precision in bits.
    :param cfield: The declared constants and their values.
    :return: A ball containing f(n).
    :rtype: holoscope.exactnum.Ball

    Usage:

        >>> eval_ball(Log(Var()), 1).contains(0)
        True
    """
    check_prec(prec)
    point = n if isinstance(n, Ball) else Ball.exact(n, prec + GUARD_BITS)
    return _eval(e, point, prec, cfield)


def _eval(e: Expr, point: Ball, prec: int, cfield: ConstField) -> Ball:
    if isinstance(e, Var):
        return point
    if isinstance(e, Num):
        return Ball.exact(e.value, prec)
    if isinstance(e, Const):
        return constant_ball(e.name, prec, cfield)
    if isinstance(e, Zeta):
        if not point.is_exact or point.mid.denominator != 1:
            msg = 'zeta is only evaluated at integer points.'
            raise DomainViolation(msg)
        s = e.a * int(point.mid) + e.b
        if s < 2:
            msg = f'zeta({s}) is not a convergent series value.'
            raise DomainViolation(msg)
        return zeta_ball(s, prec)

    args = [_eval(child, point, prec, cfield) for child in children(e)]
    if isinstance(e, Add):
        return args[0] + args[1]
    if isinstance(e, Sub):
        return args[0] - args[1]
    if isinstance(e, Mul):
        return args[0] * args[1]
    if isinstance(e, Div):
        return args[0] / args[1]
    if isinstance(e, Neg):
        return -args[0]
    if isinstance(e, Pow):
        return ball_apply('pow', args, e.exponent, prec)
    if isinstance(e, Gamma):
        return gamma_ball(args[0], prec)
    return ball_apply(NAMES[type(e)], args, prec=prec)


def _exp_base(u: Expr) -> Optional[tuple[Fraction, Fraction]]:
    """Match exp(u) with u affine in x and exp(u) = c * q**x for
    rationals c and q. Returns (c, q) or None.
    """
    if contains(u, (Const, Zeta, Gamma, Sin, Cos, Atan, Exp)):
        return None
    value = sympy.expand(sympy.expand_log(to_sympy(u), force=True))
    if sympy.diff(value, X, 2) != 0:
        return None
    slope = sympy.exp(sympy.diff(value, X))
    intercept = sympy.exp(value.subs(X, 0))
    if not (slope.is_Rational and intercept.is_Rational):
        return None
    return to_fraction(intercept), to_fraction(slope)


def is_exact(e: Expr) -> bool:
    """Whether f(n) is rational for every integer n and can be
    computed exactly: rational operations, integer powers, and
    exponentials c * q**x with rational c and q.
    """
    if isinstance(e, (Var, Num)):
        return True
    if isinstance(e, Pow):
        return e.exponent.denominator == 1 and is_exact(e.base)
    if isinstance(e, (Neg,) + Binary):
        return all(is_exact(child) for child in children(e))
    if isinstance(e, Exp):
        return _exp_base(e.arg) is not None
    return False


def eval_exact(e: Expr, n: int) -> Fraction:
    """Compute f(n) exactly for an expression where :func:`is_exact`
    holds.

    Usage:

        >>> eval_exact(div(add(power(Var(), 2), num(1)), add(Var(), num(3))), 2)
        Fraction(1, 1)
    """
    if isinstance(e, Var):
        return Fraction(n)
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Exp):
        match = _exp_base(e.arg)
        if match is None:
            msg = f'{show(e)} has no exact value.'
            raise ValueError(msg)
        intercept, slope = match
        return intercept * slope ** n
    args = [eval_exact(child, n) for child in children(e)]
    if isinstance(e, Add):
        return args[0] + args[1]
    if isinstance(e, Sub):
        return args[0] - args[1]
    if isinstance(e, Mul):
        return args[0] * args[1]
    if isinstance(e, Div):
        if not args[1]:
            msg = f'Division by zero at n={n}.'
            raise ZeroDivisionError(msg)
        return args[0] / args[1]
    if isinstance(e, Neg):
        return -args[0]
    if isinstance(e, Pow) and e.exponent.denominator == 1:
        if not args[0] and e.exponent < 0:
            msg = f'Division by zero at n={n}.'
            raise ZeroDivisionError(msg)
        return args[0] ** int(e.exponent)
    msg = f'{show(e)} has no exact value.'
    raise ValueError(msg)


# Oracle.
class ExprOracle(SeqOracle):
    """The values f(n) of a closed form.

    :param e: The expression.
    :param cfield: The declared constants.
    :param first: The first index.
    """
    kind = 'expr'

    def __init__(
        self,
        e: Expr,
        cfield: ConstField = QQ_FIELD,
        first: int = 1
    ) -> None:
        self.expr = e
        self.cfield = cfield
        self.first = first
        self.exact = is_exact(e)
        self._cache: dict[tuple[int, int], Union[Fraction, Ball]] = {}

    def term(self, n: int, prec: int = 64) -> Union[Fraction, Ball]:
        key = (n, 0 if self.exact else prec)
        if key not in self._cache:
            try:
                if self.exact:
                    value = eval_exact(self.expr, n)
                else:
                    value = eval_ball(self.expr, n, prec, self.cfield)
            except (DomainViolation, ZeroDivisionError) as ex:
                raise OracleDomain(n, f'f({n}) is undefined: {ex}')
            self._cache[key] = value
        return self._cache[key]


__all__ = [
    'Add', 'Atan', 'Const', 'Cos', 'Div', 'Exp', 'Expr', 'ExprOracle',
    'Gamma', 'Log', 'Mul', 'Neg', 'Num', 'Pow', 'Sin', 'Sub', 'Var', 'Zeta',
    'add', 'constant_rule', 'differentiate', 'div', 'eval_ball', 'eval_exact', 'is_exact',
    'mul', 'neg', 'num', 'power', 'shift', 'show', 'sub', 'to_sympy',
]
