"""
test_analysis
~~~~~~~~~~~~~

Unit tests for :mod:`holoscope.analysis`.
"""
from fractions import Fraction

import pytest
import sympy

from holoscope import analysis as an
from holoscope import sample
from holoscope.errors import NotInClass, NotInRing, NotRadical, UndeclaredConstant
from holoscope.model import ClassTag, ProperAlgebraic, RationalForm
from holoscope.parser import make_cfield, parse
from holoscope.polyring import X
from holoscope.utility import roll_between


# Fixtures.
@pytest.fixture
def seeded():
    """Seed the random source."""
    sample.seed('holoscope')


@pytest.fixture
def alpha_field():
    """A field with the symbolic constant a."""
    return make_cfield([('a', '')])


# Utility functions.
def kind_of(text, constants=()):
    return an.class_of(parse(text, list(constants))).kind


# Tests for class_of.
def test_class_of_rational():
    """Rational operations on x give rational functions."""
    assert an.class_of(parse('(x^2 + 1)/(x + 3)')) == ClassTag('Rational')


def test_class_of_radical_that_is_rational():
    """A radical expression that reduces is still rational."""
    assert kind_of('(x^(1/2))^2') == 'Rational'


def test_class_of_algebraic_power():
    """A surviving fractional power is a proper algebraic function."""
    tag = an.class_of(parse('x^(1/2) + 1'))
    assert tag.kind == 'AlgebraicPower'
    assert tag.params[1] == Fraction(1, 2)


def test_class_of_zeta():
    """zeta(a*x + b) keeps its coefficients."""
    assert an.class_of(parse('zeta(2*x + 1)')) == ClassTag('ZetaArg', (2, 1))


def test_class_of_gamma_product():
    """Products of gamma powers collect their exponents per shift."""
    tag = an.class_of(parse('gamma(x)^2/gamma(x - 1/2)'))
    assert tag.kind == 'GammaProduct'
    assert tag.params == (
        (Fraction(0), Fraction(1, 2)),
        (Fraction(2), Fraction(-1)),
    )


def test_class_of_gamma_cancels():
    """Gamma factors that cancel leave a rational function."""
    assert kind_of('gamma(x)*gamma(x)/gamma(x)^2') == 'Rational'


def test_class_of_power_self():
    """x^x and its scalings are power-self functions."""
    assert an.class_of(parse('x^x')) == ClassTag('PowerSelf', (Fraction(1),))
    tag = an.class_of(parse('3*x^(2*x)'))
    assert tag == ClassTag('PowerSelf', (Fraction(2),))


def test_class_of_log_arctan():
    """Logs and arctangents of rational functions are one class."""
    assert an.class_of(parse('log(x) + x')) == ClassTag('LogArctan', ('log',))
    tag = an.class_of(parse('atan(x)*log(x + 1)'))
    assert tag == ClassTag('LogArctan', ('atan', 'log'))


def test_class_of_log_that_cancels():
    """A log that simplifies away leaves a rational function."""
    assert kind_of('log(x^2) - 2*log(x) + x') == 'Rational'


def test_class_of_trig():
    """sin and cos of affine arguments are conjugate pairs."""
    tag = an.class_of(parse('2*sin(3*x + 1)'))
    assert tag == ClassTag('ExpPoly', ('conjugate-pair', 'sin', '3'))


def test_class_of_exp_poly():
    """Rational exponentials report their bases."""
    assert an.class_of(parse('2^x/(3^x + 1)')) == ClassTag('ExpPoly', ('2', '3'))


def test_class_of_known():
    """Known non-holonomic shapes are tagged with their id."""
    tag = an.class_of(parse('exp(1/x)'))
    assert tag == ClassTag('KnownNonHolonomic', ('exp-inverse',))


def test_class_of_other():
    """Shapes no rule knows fall through."""
    assert kind_of('exp(x^2)') == 'Other'


# Tests for rational_form.
def test_rational_form():
    """Rational trees reduce to lowest terms."""
    f = an.rational_form(parse('(x^2 - 1)/(x - 1)'))
    assert f.as_expr() == X + 1


def test_rational_form_after_simplification():
    """Transcendental nodes that cancel are removed."""
    assert an.rational_form(parse('exp(log(x))')).as_expr() == X


def test_rational_form_not_rational():
    """Logs and proper radicals are not rational functions."""
    for text in ('log(x)', 'x^(1/2)'):
        with pytest.raises(NotInClass):
            an.rational_form(parse(text))


# Tests for known_pattern.
def test_known_pattern():
    """Every known shape is recognized by its id."""
    cases = {
        'exp(1/x)': 'exp-inverse',
        '5*exp(exp(1/(x + 1)))': 'exp-exp-inverse',
        'exp(x^(1/2))': 'exp-radical',
        'sin(1/x)': 'trig-inverse',
        '1/(exp(x^2) + 1)': 'exp-pole-accumulation',
    }
    for text, ident in cases.items():
        assert an.known_pattern(parse(text)) == ident, text


def test_known_pattern_none():
    """Poles in the right half plane and entire arguments are not
    known shapes.
    """
    for text in ('exp(x)', 'exp(1/(x - 1))', 'exp(x^2)'):
        assert an.known_pattern(parse(text)) is None, text


# Tests for singularity_witness.
def test_singularity_witness():
    """Each rule reports its point and nature."""
    cases = {
        'log(x - 1)': ('1', 'branch point', 'log'),
        'atan(x)': ('I', 'branch point', 'atan'),
        'gamma(x)^(1/2)': ('0', 'branch point', 'gamma-power'),
        'x^(1/2)': ('0', 'branch point', 'fractional-power'),
        'exp(1/x)': ('0', 'essential', 'exp-pole'),
        'cos(1/(x + 2))': ('-2', 'essential', 'trig-pole'),
    }
    for text, expected in cases.items():
        witness = an.singularity_witness(parse(text))
        assert tuple(witness) == expected, text


def test_singularity_witness_pole_accumulation():
    """Exponential denominators have accumulating poles."""
    witness = an.singularity_witness(parse('1/(exp(x^2) + 1)'))
    assert witness.nature == 'pole-accumulation'
    assert witness.rule == 'exp-denominator'


def test_singularity_witness_priority():
    """Earlier rules win over later ones."""
    witness = an.singularity_witness(parse('x^(1/2) + log(x)'))
    assert witness.rule == 'log'


def test_singularity_witness_entire():
    """Entire functions have no witness."""
    for text in ('exp(x)', 'sin(x)', 'x^2 + 1'):
        assert an.singularity_witness(parse(text)) is None, text


# Tests for log_derivative_decompose.
def test_log_derivative_decompose():
    """exp(1/x) * (x-1)^3 splits into r = 1/x and one factor."""
    d = an.log_derivative_decompose(parse('exp(1/x)*(x-1)^3'))
    assert d.r.as_expr() == 1 / X
    assert [(f.base.as_expr(), f.exponent) for f in d.factors] == [
        (X - 1, Fraction(3)),
    ]


def test_log_derivative_decompose_fractional():
    """Fractional powers keep their exponents."""
    d = an.log_derivative_decompose(parse('(x + 1)^(1/2)/x^2'))
    assert d.r.is_zero
    exponents = {str(f.base): f.exponent for f in d.factors}
    assert exponents == {'x': Fraction(-2), 'x + 1': Fraction(1, 2)}


def test_log_derivative_decompose_not_in_class():
    """Logs and the zero function have no decomposition."""
    for text in ('log(x)', '0'):
        with pytest.raises(NotInClass):
            an.log_derivative_decompose(parse(text))


# Tests for shift_quotient_rational.
def test_shift_quotient_exp():
    """exp(x) has a rational shift quotient at every shift."""
    d = an.log_derivative_decompose(parse('exp(x)'))
    for k in range(1, 6):
        result = an.shift_quotient_rational(d, k)
        assert result.rational
        assert result.exp_shift == k
        assert result.quotient == 1


def test_shift_quotient_exp_square():
    """exp(x^2) fails on the exponential part."""
    d = an.log_derivative_decompose(parse('exp(x^2)'))
    result = an.shift_quotient_rational(d, 1)
    assert not result.rational
    assert result.reason == 'r(x+1) - r(x) = 2*x + 1 is not constant'


def test_shift_quotient_square_root():
    """x^(1/2) fails on a fractional net exponent."""
    d = an.log_derivative_decompose(parse('x^(1/2)'))
    result = an.shift_quotient_rational(d, 1)
    assert not result.rational
    assert 'is not an integer' in result.reason


def test_shift_quotient_bad_shift():
    """Shifts start at one."""
    d = an.log_derivative_decompose(parse('exp(x)'))
    with pytest.raises(ValueError):
        an.shift_quotient_rational(d, 0)


def test_shift_quotient_random_integral(seeded):
    """With integer exponents the answer depends on the degree of r
    only, and the quotient matches the factors.
    """
    for _ in range(30):
        d = sample.random_decomposition(integral=True)
        k = roll_between(1, 3)
        result = an.shift_quotient_rational(d, k)
        assert result.rational == (d.r.num.degree() <= 1)
        if not result.rational:
            continue
        expected = sympy.Integer(1)
        for f in d.factors:
            c = int(f.exponent)
            expected *= f.base.shift(k).as_expr() ** c / f.base.as_expr() ** c
        assert sympy.cancel(expected - result.quotient.as_expr()) == 0


def test_shift_quotient_random_fractional(seeded):
    """A proper fractional exponent always blocks a rational
    quotient.
    """
    for _ in range(30):
        d = sample.random_decomposition(integral=False)
        result = an.shift_quotient_rational(d, 1)
        if d.factors:
            assert not result.rational


# Tests for LogPoly and to_logpoly.
def test_to_logpoly():
    """Coefficients are rational functions of x."""
    lp = an.to_logpoly(parse('(x + 1)*log(x)'))
    assert list(lp.terms) == [(1,)]
    assert lp.terms[(1,)].as_expr() == X + 1


def test_to_logpoly_shifted():
    """Shifted logs get their own slot."""
    lp = an.to_logpoly(parse('log(x + 1) - log(x)'), 1)
    expected = sympy.log(X + 1) - sympy.log(X)
    assert sympy.simplify(lp.as_sympy() - expected) == 0
    assert lp.width == 2


def test_to_logpoly_constant_offset():
    """Logs of constants go to the offset."""
    lp = an.to_logpoly(parse('log(2*x)'))
    assert lp.offset == {2: Fraction(1)}
    assert list(lp.terms) == [(1,)]


def test_to_logpoly_not_in_ring():
    """Other shapes are not log-polynomials."""
    cases = [
        ('log(x + 2)', 1),
        ('exp(x)', 0),
        ('1/log(x)', 0),
        ('log(-x)', 0),
        ('x*log(2)', 0),
    ]
    for text, shift in cases:
        with pytest.raises(NotInRing):
            an.to_logpoly(parse(text), shift)


def test_to_logpoly_negative_shift():
    """The largest shift cannot be negative."""
    with pytest.raises(ValueError):
        an.to_logpoly(parse('log(x)'), -1)


def test_logpoly_leading():
    """The leading term is the largest in the log with the largest
    shift first.
    """
    lp = an.to_logpoly(parse('log(x)^2 + x*log(x + 1)'), 1)
    vector, coeff = lp.leading()
    assert vector == (0, 1)
    assert coeff.as_expr() == X
    assert lp.log_degree() == (1, 0)


def test_logpoly_diff():
    """Differentiation follows the product rule."""
    lp = an.to_logpoly(parse('x*log(x)')).diff()
    assert sympy.simplify(lp.as_sympy() - sympy.log(X) - 1) == 0


def test_logpoly_diff_drops_offset():
    """Logs of constants differentiate to zero."""
    lp = an.to_logpoly(parse('log(x) - log(2)')).diff()
    assert not lp.offset
    assert lp.as_sympy() == 1 / X


def test_logpoly_eval_ball():
    """Balls enclose the value."""
    lp = an.to_logpoly(parse('x*log(x) + log(3)'))
    assert not lp.eval_ball(1).contains(0)
    assert lp.eval_ball(1).overlaps(an.to_logpoly(parse('log(3)')).eval_ball(1))


def test_logpoly_constant_value():
    """Only rational constants have a constant value."""
    assert an.to_logpoly(parse('3/2')).constant_value() == Fraction(3, 2)
    assert an.to_logpoly(parse('log(2)')).constant_value() is None
    assert an.to_logpoly(parse('x')).constant_value() is None


# Tests for algebraic_normalize.
def test_algebraic_normalize_rational():
    """Powers that combine to integers reduce."""
    form = an.algebraic_normalize(parse('(x^(1/2))^2'))
    assert isinstance(form, RationalForm)
    assert form.value.as_expr() == X


def test_algebraic_normalize_proper():
    """A surviving fractional power is reported."""
    form = an.algebraic_normalize(parse('x^(1/2)*(x + 1)'))
    assert isinstance(form, ProperAlgebraic)
    assert form.exponent == Fraction(1, 2)


def test_algebraic_normalize_not_radical():
    """Only radical expressions are normalized."""
    with pytest.raises(NotRadical):
        an.algebraic_normalize(parse('log(x)'))


# Tests for exp_ring.
def test_exp_ring():
    """Independent bases each get a generator."""
    ring = an.exp_ring(parse('2^x/(3^x + 1)'))
    y1, y2 = sympy.symbols('y1 y2')
    assert ring.labels == ('2', '3')
    assert ring.relation is None
    assert sympy.simplify(ring.value - y1 / (y2 + 1)) == 0


def test_exp_ring_dependent_bases():
    """Dependent bases are rewritten over their primes."""
    ring = an.exp_ring(parse('6^x + 2^x*3^x'))
    y1, y2 = sympy.symbols('y1 y2')
    assert ring.relation is not None
    assert [g.label for g in ring.generators] == ['2', '3']
    assert sympy.expand(ring.value - 2 * y1 * y2) == 0


def test_exp_ring_fractional_exponent():
    """A base with a fractional exponent is replaced by its root."""
    ring = an.exp_ring(parse('2^(x/2)'))
    assert [g.label for g in ring.generators] == ['2^(1/2)']


def test_exp_ring_named_constant(alpha_field):
    """Declared constants can be bases."""
    ring = an.exp_ring(parse('a^x + 1', ['a']), alpha_field)
    assert ring.labels == ('a',)


def test_exp_ring_undeclared_base():
    """Named bases must be declared."""
    with pytest.raises(UndeclaredConstant):
        an.exp_ring(parse('a^x', ['a']))


def test_exp_ring_not_exp_poly():
    """Expressions without suitable exponentials have no ring."""
    for text in ('x^2 + 1', 'exp(x^2)', 'exp(x) + log(x)'):
        assert an.exp_ring(parse(text)) is None, text
