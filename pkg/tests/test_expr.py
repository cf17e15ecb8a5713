"""
test_expr
~~~~~~~~~

Unit tests for :mod:`holoscope.expr`.
"""
from fractions import Fraction

import pytest
import sympy

from holoscope import expr as ex
from holoscope.errors import DomainViolation, OracleDomain, UnsupportedDerivative
from holoscope.exactnum import Ball, pi_ball, zeta_ball
from holoscope.parser import parse
from holoscope.polyring import X


# Fixtures.
@pytest.fixture
def log_over_linear():
    """log(x)/(x + 1)."""
    return ex.div(ex.Log(ex.Var()), ex.add(ex.Var(), ex.num(1)))


# Tests for construction.
def test_add_folds_numbers():
    """Rational leaves are folded into one."""
    e = ex.add(ex.add(ex.Var(), ex.num(1)), ex.num(2))
    assert e == ex.Add(ex.Var(), ex.Num(Fraction(3)))


def test_mul_identities():
    """Multiplying by one or zero simplifies."""
    assert ex.mul(ex.num(1), ex.Var()) == ex.Var()
    assert ex.mul(ex.Var(), ex.num(0)) == ex.num(0)


def test_div_by_literal_zero():
    """Dividing by the literal zero fails at construction."""
    with pytest.raises(ZeroDivisionError):
        ex.div(ex.Var(), ex.num(0))


def test_power_folds():
    """Integer powers of numbers fold; trivial exponents vanish."""
    assert ex.power(ex.num(2), 3) == ex.num(8)
    assert ex.power(ex.Var(), 1) == ex.Var()
    assert ex.power(ex.Var(), 0) == ex.num(1)


# Tests for show.
def test_show(log_over_linear):
    """Expressions print in the grammar."""
    assert ex.show(log_over_linear) == 'log(x)/(x + 1)'
    assert ex.show(ex.Zeta(2, 1)) == 'zeta(2*x + 1)'
    assert ex.show(ex.power(ex.Var(), Fraction(1, 2))) == 'x^(1/2)'


def test_show_parses_back():
    """Printed expressions parse to the same tree."""
    for text in (
        'log(x)/(x + 1)',
        'exp(1/x)',
        'x^(1/2) - 3*x',
        '(log(x) + sin(1/(x + 1)))/(exp(x) + x^2 + 1)',
        'zeta(2*x + 1)',
        'gamma(x + 1)^(1/2)',
    ):
        e = parse(text)
        assert parse(ex.show(e)) == e, text


# Tests for shift and substitute.
def test_shift():
    """Shifting replaces x with x + k."""
    e = parse('log(x)')
    assert ex.show(ex.shift(e, 2)) == 'log(x + 2)'
    assert ex.shift(ex.Zeta(2, 1), 1) == ex.Zeta(2, 3)
    assert ex.shift(e, 0) is e


def test_substitute():
    """Substitution puts an expression in for x."""
    e = ex.substitute(parse('log(x)'), parse('x^2'))
    assert ex.show(e) == 'log(x^2)'


# Tests for differentiate.
def test_differentiate_agrees_with_sympy():
    """Derivatives agree with sympy's."""
    for text in (
        'log(x)/(x + 1)',
        'exp(1/x)',
        'sin(x)*cos(x)',
        'atan(x^2)',
        'x^(1/3)',
    ):
        e = parse(text)
        ours = ex.to_sympy(ex.differentiate(e))
        theirs = sympy.diff(ex.to_sympy(e), X)
        assert sympy.simplify(ours - theirs) == 0, text


def test_differentiate_zeta():
    """zeta has no supported derivative."""
    with pytest.raises(UnsupportedDerivative):
        ex.differentiate(ex.Zeta(1, 2))


# Tests for eval_ball.
def test_eval_ball_log():
    """log(1) is zero."""
    assert ex.eval_ball(ex.Log(ex.Var()), 1).contains(0)


def test_eval_ball_agrees_with_sympy(log_over_linear):
    """Balls contain sympy's high precision values."""
    for n in range(1, 11):
        ball = ex.eval_ball(log_over_linear, n, 64)
        value = Fraction(str(sympy.N(ex.to_sympy(log_over_linear).subs(X, n), 40)))
        error = Fraction(1, 10 ** 30)
        assert ball.overlaps(Ball.from_interval(value - error, value + error, 128))


def test_eval_ball_zeta():
    """zeta(2x + 1) at one is zeta(3)."""
    ball = ex.eval_ball(ex.Zeta(2, 1), 1, 64)
    assert ball.overlaps(zeta_ball(3, 64))


def test_eval_ball_zeta_pole():
    """zeta(x) at one is the pole."""
    with pytest.raises(DomainViolation):
        ex.eval_ball(ex.Zeta(1, 0), 1, 64)


def test_eval_ball_constants():
    """pi evaluates to its ball."""
    ball = ex.eval_ball(parse('pi*x'), 2, 64)
    assert ball.overlaps(pi_ball(64) * 2)


def test_eval_ball_undeclared_value():
    """A constant without a value cannot be evaluated."""
    with pytest.raises(DomainViolation):
        ex.eval_ball(ex.Const('a'), 1, 64)


# Tests for exact evaluation.
def test_is_exact():
    """Rational operations and rational exponentials are exact."""
    assert ex.is_exact(parse('(x^2 + 1)/(x + 3)'))
    assert ex.is_exact(parse('2^x + x*3^(-x)'))
    assert not ex.is_exact(parse('log(x)'))
    assert not ex.is_exact(parse('x^(1/2)'))


def test_eval_exact():
    """Exact evaluation gives rationals."""
    assert ex.eval_exact(parse('(x^2 + 1)/(x + 3)'), 2) == 1
    assert ex.eval_exact(parse('2^x + x*3^(-x)'), 2) == Fraction(38, 9)


# Tests for ExprOracle.
def test_expr_oracle_exact():
    """Exact closed forms give exact terms."""
    seq = ex.ExprOracle(parse('1/(2^x + 1)'))
    assert seq.exact
    assert seq(3) == Fraction(1, 9)


def test_expr_oracle_ball():
    """Other closed forms give balls."""
    seq = ex.ExprOracle(parse('log(x)'))
    assert not seq.exact
    assert seq(1, 64).contains(0)


def test_expr_oracle_domain():
    """Undefined terms are reported with their index."""
    seq = ex.ExprOracle(parse('1/(x - 2)'))
    with pytest.raises(OracleDomain) as excinfo:
        seq(2)
    assert excinfo.value.n == 2
