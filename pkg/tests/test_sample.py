"""
test_sample
~~~~~~~~~~~

Unit tests for :mod:`holoscope.sample`.
"""
import pytest

from holoscope import sample
from holoscope.polyring import largest_integer_root


# Fixtures.
@pytest.fixture
def seeded():
    """Seed the random source."""
    sample.seed('spam')


# Tests for seed.
def test_seed_repeats():
    """The same seed gives the same draws."""
    sample.seed('eggs')
    first = [sample.random_poly(3) for _ in range(5)]
    sample.seed('eggs')
    assert [sample.random_poly(3) for _ in range(5)] == first


# Tests for polynomials.
def test_random_poly_degree(seeded):
    """Polynomials have the asked degree."""
    for degree in range(5):
        assert sample.random_poly(degree).degree() == degree


def test_random_poly_positive(seeded):
    """Positive polynomials have positive coefficients."""
    for _ in range(20):
        p = sample.random_poly(3, positive=True)
        assert all(c > 0 for c in p.all_coeffs())


def test_random_ratfun_no_positive_pole(seeded):
    """Denominators have no positive root."""
    for _ in range(20):
        f = sample.random_ratfun()
        assert all(c > 0 for c in f.den.all_coeffs())


# Tests for log-polynomials.
def test_random_logpoly(seeded):
    """Log-polynomials are nonzero and have logs."""
    for _ in range(20):
        f = sample.random_logpoly(max_shift=1)
        assert f.width == 2
        assert f.has_logs
        assert not f.is_zero


# Tests for recurrences.
def test_random_recurrence(seeded):
    """Leading coefficients have no positive integer root."""
    for _ in range(20):
        rec = sample.random_recurrence(max_order=3)
        assert 1 <= rec.order <= 3
        root = largest_integer_root(rec.coeffs[-1])
        assert root is None or root < 1


def test_random_initial(seeded):
    """One initial value per order."""
    assert len(sample.random_initial(3)) == 3


# Tests for decompositions.
def test_random_decomposition_integral(seeded):
    """Forced integer exponents are integers."""
    for _ in range(20):
        d = sample.random_decomposition(integral=True)
        assert all(f.exponent.denominator == 1 for f in d.factors)


def test_random_decomposition_fractional(seeded):
    """Forced fractional exponents are proper fractions with distinct
    bases.
    """
    for _ in range(20):
        d = sample.random_decomposition(integral=False)
        assert all(f.exponent.denominator != 1 for f in d.factors)
        bases = [str(f.base) for f in d.factors]
        assert len(set(bases)) == len(bases)
        assert bases == sorted(bases)
