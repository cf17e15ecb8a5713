"""
test_prover
~~~~~~~~~~~

Unit tests for :mod:`holoscope.prover`.
"""
import itertools
from fractions import Fraction

import pytest

from holoscope import cli
from holoscope import prover as pv
from holoscope import sample
from holoscope.analysis import LogPoly, to_logpoly
from holoscope.errors import InsufficientTerms, OracleDomain, ZeroFunction
from holoscope.exactnum import Ball
from holoscope.expr import ExprOracle
from holoscope.parser import make_cfield, parse, parse_recurrence
from holoscope.recurrence import (
    FunctionOracle,
    TermsOracle,
    annihilates,
    make_recurrence
)


# Fixtures.
@pytest.fixture
def seeded():
    """Seed the random source."""
    sample.seed('holoscope')


@pytest.fixture
def harmonic():
    """The exact harmonic numbers H(1) through H(200)."""
    values = [Fraction(0)]
    for n in range(1, 201):
        values.append(values[-1] + Fraction(1, n))
    return TermsOracle(values[1:])


# Utility functions.
def sign_changes(f, lo=1, hi=101, step=Fraction(1, 8)):
    """Count the sign changes of a log-polynomial seen on a grid,
    ignoring points where the sign is not certain.
    """
    count = 0
    last = 0
    x = Fraction(lo)
    while x <= hi:
        ball = f.eval_ball(x, 64)
        if ball.excludes_zero():
            sign = 1 if ball.mid > 0 else -1
            if last and sign != last:
                count += 1
            last = sign
        x += step
    return count


# Tests for rolle_zero_bound.
def test_rolle_zero_bound_log():
    """log(x) has one zero on [1, oo)."""
    cert = pv.rolle_zero_bound(LogPoly.log(1, 0))
    assert cert.bound == 1
    assert len(cert.chain) == 1


def test_rolle_zero_bound_log_offset():
    """log(x) - log(2) changes sign at two and the bound covers it."""
    f = to_logpoly(parse('log(x) - log(2)'))
    cert = pv.rolle_zero_bound(f)
    assert cert.bound >= 1
    assert f.eval_ball(Fraction(15, 8), 64).mid < 0
    assert f.eval_ball(Fraction(17, 8), 64).mid > 0
    assert f.eval_ball(Fraction(15, 8), 64).excludes_zero()
    assert f.eval_ball(Fraction(17, 8), 64).excludes_zero()
    assert cert.bound >= sign_changes(f) == 1


def test_rolle_zero_bound_offset_nonconstant_leading():
    """A constant log under a nonconstant leading coefficient is
    removed by a plain derivative first.
    """
    f = to_logpoly(parse('x*log(x) - log(3)'))
    cert = pv.rolle_zero_bound(f)
    assert cert.chain[0].divisor == 1
    assert cert.bound >= sign_changes(f) >= 1


def test_rolle_zero_bound_rational():
    """Without logs the bound counts the roots of the numerator."""
    f = to_logpoly(parse('(x - 2)*(x - 3)/(x + 1)'))
    cert = pv.rolle_zero_bound(f)
    assert cert.chain == ()
    assert cert.bound == 2


def test_rolle_zero_bound_random(seeded):
    """The bound is never below the sign changes seen on a grid."""
    for _ in range(50):
        f = sample.random_logpoly()
        cert = pv.rolle_zero_bound(f)
        assert cert.bound >= sign_changes(f), str(f)


def test_rolle_zero_bound_errors():
    """The ray starts at a positive point; zero has no bound."""
    with pytest.raises(ValueError):
        pv.rolle_zero_bound(LogPoly.log(1, 0), 0)
    with pytest.raises(ZeroFunction):
        pv.rolle_zero_bound(LogPoly.constant(1, 0))


# Tests for ball_determinant.
def test_ball_determinant():
    """Ball determinants contain the exact value."""
    rows = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1, 3)]]
    matrix = [[Ball.exact(v, 64) for v in row] for row in rows]
    assert pv.ball_determinant(matrix).contains(Fraction(-1, 3))


def test_ball_determinant_singular():
    """A singular matrix has no certified determinant."""
    rows = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    matrix = [[Ball.exact(v, 64) for v in row] for row in rows]
    assert pv.ball_determinant(matrix) is None


# Tests for falsify.
def test_falsify_log():
    """log(n) is refuted in every cell up to order and degree three."""
    seq = ExprOracle(parse('log(x)'))
    result = pv.falsify(seq, 3, 3, (1, 64), 64, 1024)
    assert result.status == 'refuted'
    assert result.recurrence is None
    refuted = {(c.order, c.degree) for c in result.certificates}
    assert len(refuted) == 12
    for cert in result.certificates:
        assert cert.determinant.excludes_zero()
        assert len(cert.rows) == len(cert.columns)


def test_falsify_log_doubled_precision():
    """The refutations of log(n) survive at twice the precision."""
    seq = ExprOracle(parse('log(x)'))
    first = pv.falsify(seq, 3, 3, (1, 64), 64, 1024)
    second = pv.falsify(seq, 3, 3, (1, 64), 128, 2048)
    assert second.status == 'refuted'
    cells = {(c.order, c.degree, c.start) for c in first.certificates}
    assert {(c.order, c.degree, c.start) for c in second.certificates} == cells
    for cert in second.certificates:
        assert cert.precision >= 128
        assert cert.determinant.excludes_zero()


def test_falsify_harmonic(harmonic):
    """The harmonic numbers give their order two recurrence."""
    result = pv.falsify(harmonic, 2, 1, (1,))
    assert result.status == 'candidate'
    assert str(result.recurrence) == 'n + 1, -2*n - 3, n + 2 @ 1'
    assert result.validation.holds
    assert annihilates(result.recurrence, harmonic, 1, 190).holds


def test_falsify_harmonic_bfile():
    """Sixty b-file terms give a recurrence that holds on the next
    five hundred terms.
    """
    seq = TermsOracle(cli.read_bfile('tests/data/harmonic.bfile'))
    assert seq.last == 60
    result = pv.falsify(seq, 2, 1, (1,))
    assert result.status == 'candidate'
    assert result.recurrence.order == 2
    assert result.recurrence.degree == 1
    values = [Fraction(0)]
    for n in range(1, 563):
        values.append(values[-1] + Fraction(1, n))
    exact = TermsOracle(values[1:])
    check = annihilates(result.recurrence, exact, 61, 560)
    assert check.holds


def test_falsify_exact_refutation_certificates(harmonic):
    """Exact refutations carry exact nonzero determinants."""
    result = pv.falsify(harmonic, 1, 1, (1,))
    assert result.status == 'refuted'
    for cert in result.certificates:
        assert cert.precision == 0
        assert cert.determinant.excludes_zero()


def test_falsify_constant_coefficients():
    """2^n + 3^n has a constant coefficient recurrence of order two."""
    seq = FunctionOracle(lambda n: Fraction(2 ** n + 3 ** n))
    result = pv.falsify(seq, 2, 0, (1,))
    assert result.status == 'candidate'
    assert str(result.recurrence) == '6, -5, 1 @ 1'
    outcomes = [c.outcome for c in result.cells]
    assert outcomes == ['refuted', 'candidate']


def test_falsify_too_few_terms():
    """Windows that do not fit are skipped."""
    seq = TermsOracle([Fraction(1), Fraction(2), Fraction(3)])
    with pytest.raises(InsufficientTerms):
        pv.falsify(seq, 1, 0, (1,))


def test_falsify_undefined_terms():
    """When every cell hits an undefined term, the term is reported."""
    seq = ExprOracle(parse('1/(x - 3)'))
    with pytest.raises(OracleDomain) as excinfo:
        pv.falsify(seq, 1, 0, (1,))
    assert excinfo.value.n == 3


def test_falsify_skips_undefined_window():
    """A window past the undefined term still decides."""
    seq = ExprOracle(parse('1/(x - 3)'))
    result = pv.falsify(seq, 1, 0, (1, 10))
    assert result.status == 'refuted'
    assert [c.outcome for c in result.cells] == ['undefined', 'refuted']


# Tests for vandermonde_certificate.
def test_vandermonde_certificate_values():
    """Small determinants have known values."""
    assert pv.vandermonde_certificate(1).determinant == Fraction(-3, 4)
    assert pv.vandermonde_certificate(2).determinant == Fraction(-5, 54)


def test_vandermonde_certificate_product():
    """Elimination agrees with the product formula."""
    for d in range(9):
        cert = pv.vandermonde_certificate(d)
        assert cert.product_matches
        assert cert.determinant != 0


def test_vandermonde_certificate_negative():
    """The size parameter cannot be negative."""
    with pytest.raises(ValueError):
        pv.vandermonde_certificate(-1)


# Tests for elimination_trace.
def test_elimination_trace():
    """a(n) - a(n+1) fails at the second stage."""
    rec = make_recurrence([[1], [-1]], normal=False)
    trace = pv.elimination_trace(rec, prec=64)
    assert trace.failed_at == 2
    assert trace.witness == 1
    assert trace.value == Fraction(3, 4)
    assert not trace.zero_operator
    assert trace.residual.excludes_zero()


def test_elimination_trace_late_start():
    """Recurrences valid only past the search limit still get a witness."""
    rec = make_recurrence([[1], [-1]], valid_from=2000, normal=False)
    trace = pv.elimination_trace(rec)
    assert trace.failed_at == 2
    assert trace.witness == 2000
    assert trace.value == Fraction(3, 4)


def test_elimination_trace_exhaustive():
    """Every recurrence of order at most three with integer constant
    coefficients in [-5, 5] fails by stage d + 1.
    """
    values = range(-5, 6)
    for d in range(4):
        for coeffs in itertools.product(values, repeat=d + 1):
            if coeffs[-1] == 0:
                continue
            rec = make_recurrence([[c] for c in coeffs], normal=False)
            trace = pv.elimination_trace(rec)
            assert trace.failed_at is not None, coeffs
            assert trace.failed_at <= d + 1, coeffs
            assert trace.value != 0


def test_elimination_trace_short():
    """Stopping before the stage that fails finds nothing."""
    rec = make_recurrence([[1], [-1]], normal=False)
    trace = pv.elimination_trace(rec, lmax=1)
    assert trace.failed_at is None
    assert trace.stages[0].vanishes
    assert not trace.zero_operator


def test_elimination_trace_polynomial_coefficients():
    """The witness avoids the integer roots of the constraint."""
    rec = make_recurrence([[3, 1], [-4]], normal=False)
    trace = pv.elimination_trace(rec)
    assert trace.failed_at == 1
    assert trace.witness == 2
    assert trace.value == 1


def test_elimination_trace_needs_rationals():
    """Constants in the coefficients are not supported."""
    cfield = make_cfield([('a', '')])
    rec = parse_recurrence('1, -a', cfield)
    with pytest.raises(ValueError):
        pv.elimination_trace(rec)
