"""
test_classifier
~~~~~~~~~~~~~~~

Unit tests for :mod:`holoscope.classifier`.
"""
from fractions import Fraction

import pytest
import sympy

from holoscope import classifier as cl
from holoscope.analysis import exp_ring
from holoscope.model import JobConfig, Member, NonMember
from holoscope.parser import parse
from holoscope.polyring import QQ_FIELD


# Fixtures.
@pytest.fixture
def quick():
    """Settings that keep the falsifier small."""
    return JobConfig(dmax=1, rmax=1, windows=(1,), verify_len=60, holdout=20)


@pytest.fixture
def log_config():
    """Settings that refute every small recurrence for log(n)."""
    return JobConfig(dmax=3, rmax=3, windows=(1, 64), prec_cap=1024)


# Utility functions.
def verdict_of(text, config, constants=()):
    config = config._replace(constants=tuple(constants))
    names = [name for name, _ in constants]
    return cl.classify(parse(text, names), config)


def assert_non_holonomic(verdict, citation):
    assert verdict.status == 'NonHolonomic'
    assert verdict.citation == citation
    assert verdict.citation in cl.CITATIONS
    assert verdict.evidence.count() >= 1


def assert_holonomic(verdict):
    assert verdict.status == 'Holonomic'
    assert verdict.recurrence is not None
    assert verdict.verification.holds
    assert verdict.verification.stop > verdict.verification.start


# Tests for the verdict table.
def test_verdict_rules_cover_every_class():
    """Every class the sorter can produce has a verdict rule."""
    kinds = {
        'Rational', 'LogArctan', 'ExpPoly', 'GammaProduct', 'PowerSelf',
        'AlgebraicPower', 'ZetaArg', 'KnownNonHolonomic', 'Other',
    }
    assert set(cl.verdict_rules) == kinds


def test_known_citations_exist():
    """Known shapes cite entries of the table."""
    assert set(cl.KNOWN_CITATIONS.values()) <= set(cl.CITATIONS)


# Tests for classify: non-holonomic regressions.
def test_classify_log(log_config):
    """log(n) is cited with a branch point, refutations and a zero
    bound.
    """
    verdict = verdict_of('log(x)', log_config)
    assert_non_holonomic(verdict, 'log-arctan-field')
    assert verdict.evidence.witness.location == '0'
    assert verdict.evidence.witness.nature == 'branch point'
    orders = {(c.order, c.degree) for c in verdict.evidence.refutations}
    assert (3, 3) in orders
    assert verdict.evidence.zero_bound is not None


def test_classify_atan(quick):
    """arctan(n) has branch points off the real line."""
    verdict = verdict_of('atan(x)', quick)
    assert_non_holonomic(verdict, 'log-arctan-field')
    assert verdict.evidence.witness.rule == 'atan'


def test_classify_square_root(quick):
    """A proper fractional power is algebraic but not rational."""
    verdict = verdict_of('x^(1/2)', quick)
    assert_non_holonomic(verdict, 'algebraic-function')
    assert verdict.evidence.witness.rule == 'fractional-power'


def test_classify_growth_singularities(quick):
    """exp(1/x), exp(x^(1/2)) and exp(exp(1/x)) have singularities
    no holonomic sequence allows.
    """
    for text in ('exp(1/x)', 'exp(x^(1/2))', 'exp(exp(1/x))'):
        verdict = verdict_of(text, quick)
        assert_non_holonomic(verdict, 'growth-singularity')
        assert verdict.evidence.witness is not None, text


def test_classify_gamma_half_power(quick):
    """Gamma(x+1)^(1/2) has a fractional exponent."""
    verdict = verdict_of('gamma(x + 1)^(1/2)', quick)
    assert_non_holonomic(verdict, 'gamma-product')
    quotient = verdict.evidence.shift_quotient
    assert not quotient.rational
    assert '1/2' in quotient.reason


def test_classify_power_self(quick):
    """x^x is cited as a power-self sequence."""
    verdict = verdict_of('x^x', quick)
    assert_non_holonomic(verdict, 'power-self')
    assert verdict.tag.params == (Fraction(1),)


def test_classify_exp_denominator(quick):
    """1/(2^x + 1) is not in the Laurent ring over 2^x."""
    verdict = verdict_of('1/(2^x + 1)', quick)
    assert_non_holonomic(verdict, 'exp-polynomial-ring')
    y1 = sympy.Symbol('y1')
    assert verdict.evidence.membership == NonMember(y1 + 1)


def test_classify_odd_zeta(quick):
    """zeta(2n+1) carries the Vandermonde certificate."""
    verdict = verdict_of('zeta(2*x + 1)', quick)
    assert_non_holonomic(verdict, 'odd-zeta')
    certificate = verdict.evidence.zeta_odd
    assert certificate.d == quick.dmax
    assert certificate.product_matches
    assert (certificate.step, certificate.offset) == (1, 0)


def test_classify_zeta_unit_slope(quick):
    """zeta(n + b) has every other term on the odd zeta values."""
    cases = {'zeta(x + 2)': 1, 'zeta(x + 1)': 2, 'zeta(x)': 3}
    for text, offset in cases.items():
        verdict = verdict_of(text, quick)
        assert_non_holonomic(verdict, 'odd-zeta')
        certificate = verdict.evidence.zeta_odd
        assert certificate.step == 2, text
        assert certificate.offset == offset, text
        assert (offset + verdict.tag.params[1]) % 2 == 1


def test_classify_mixed_example(quick):
    """Logs mixed with trigonometric and exponential parts are still
    cited through the log.
    """
    text = '(log(x) + sin(1/(x + 1)))/(e^x + x^2 + 1)'
    verdict = verdict_of(text, quick)
    assert_non_holonomic(verdict, 'log-arctan-field')
    assert verdict.tag.kind == 'LogArctan'
    assert verdict.evidence.witness.rule == 'log'


# Tests for classify: holonomic regressions.
def test_classify_rational(quick):
    """A rational function has an order one recurrence."""
    verdict = verdict_of('(x^2 + 1)/(x + 3)', quick)
    assert_holonomic(verdict)
    assert verdict.recurrence.order == 1
    assert verdict.verification.exact


def test_classify_zero(quick):
    """The zero sequence has the order zero recurrence a(n) = 0."""
    verdict = verdict_of('0', quick)
    assert_holonomic(verdict)
    assert verdict.recurrence.order == 0


def test_classify_exp_polynomial(quick):
    """2^x + x*3^(-x) is a Laurent polynomial over 2^x and 3^x."""
    verdict = verdict_of('2^x + x*3^(-x)', quick)
    assert_holonomic(verdict)
    assert verdict.tag.params == ('2', '3')
    assert verdict.recurrence.order == 2


def test_classify_gamma_product(quick):
    """Integer exponents on gamma factors give a hypergeometric
    sequence.
    """
    verdict = verdict_of('gamma(x)*gamma(x - 1/2)^2', quick)
    assert_holonomic(verdict)
    assert verdict.recurrence.order == 1
    assert verdict.recurrence.degree == 3


def test_classify_sin_with_constant(quick):
    """A declared constant times sin(x) satisfies the conjugate pair
    recurrence.
    """
    verdict = verdict_of('a*sin(x)', quick, [('a', '1/3')])
    assert_holonomic(verdict)
    assert verdict.recurrence.order == 2
    assert not verdict.recurrence.is_rational


def test_classify_dependent_bases(quick):
    """1/(1 + (2^x)^2 - 4^x) is the constant sequence one."""
    verdict = verdict_of('1/(1 + (2^x)^2 - 4^x)', quick)
    assert_holonomic(verdict)
    assert str(verdict.recurrence) == '-1, 1 @ 1'


# Tests for classify: unknown.
def test_classify_other(quick):
    """Shapes without a rule come back unknown with a report."""
    verdict = verdict_of('exp(x^2)', quick)
    assert verdict.status == 'Unknown'
    assert verdict.report.dmax == 1
    assert verdict.report.windows == (1,)


def test_classify_zeta_even_shift(quick):
    """zeta(2x + 2) has no rule."""
    verdict = verdict_of('zeta(2*x + 2)', quick)
    assert verdict.status == 'Unknown'
    assert verdict.tag.kind == 'ZetaArg'


# Tests for exp_poly_membership.
def test_exp_poly_membership_non_member():
    """A denominator 2^x + 1 blocks membership."""
    found = cl.exp_poly_membership(exp_ring(parse('1/(2^x+1)')))
    y1 = sympy.Symbol('y1')
    assert found == NonMember(y1 + 1)


def test_exp_poly_membership_member():
    """Laurent polynomials list their terms."""
    found = cl.exp_poly_membership(exp_ring(parse('2^x + 1 + x/3^x')))
    assert isinstance(found, Member)
    vectors = [vector for vector, _ in found.terms]
    assert vectors == [(0, -1), (0, 0), (1, 0)]


# Tests for trig_recurrence.
def test_trig_recurrence_rational_cosine():
    """cos(pi*x) has the rational recurrence a(n+2) + 2a(n+1) + a(n)."""
    rec = cl.trig_recurrence(parse('cos(pi*x)'), QQ_FIELD)
    assert str(rec) == '1, 2, 1 @ 1'


def test_trig_recurrence_symbolic_cosine():
    """Other slopes put cos(slope) into the constant field."""
    rec = cl.trig_recurrence(parse('sin(2*x)'), QQ_FIELD)
    assert rec.order == 2
    assert 'cos(2)' in str(rec.cfield)


# Tests for gamma_shift_quotient.
def test_gamma_shift_quotient_integer_exponents():
    """Integer exponents give the rational quotient
    x * (x - 1/2)^2 for gamma(x) * gamma(x - 1/2)^2.
    """
    found = cl.gamma_shift_quotient(
        (Fraction(0), Fraction(1, 2)), (Fraction(1), Fraction(2))
    )
    assert found.rational
    assert found.quotient.eval_exact(3) == Fraction(75, 4)
    assert found.exp_shift.is_zero


def test_gamma_shift_quotient_fractional_exponent():
    """A half exponent on gamma(x + 1) blocks a rational quotient."""
    found = cl.gamma_shift_quotient((Fraction(-1),), (Fraction(1, 2),))
    assert not found.rational
    assert found.reason == 'net exponent 1/2 of x + 1 is not an integer'


def test_gamma_shift_quotient_collects_bases():
    """Half exponents on the same base add up to an integer."""
    found = cl.gamma_shift_quotient(
        (Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))
    )
    assert found.rational
    assert found.quotient.eval_exact(5) == 5
