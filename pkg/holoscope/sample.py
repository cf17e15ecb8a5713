"""
sample
~~~~~~

Random instances for property tests and demonstrations. Every draw
goes through yadr's random source, so seeding it with :func:`seed`
makes a run repeatable.
"""
from fractions import Fraction
from typing import Optional

import yadr.operator as yop
from sympy import Poly

from holoscope.analysis import LogPoly
from holoscope.model import Decomposition, Factor
from holoscope.polyring import N, X, RatFun, make_poly
from holoscope.recurrence import Recurrence, make_recurrence
from holoscope.utility import roll_between, roll_choice, roll_fraction


# Seeding.
def seed(value: str) -> None:
    """Seed the random source shared with yadr.

    Usage:

        >>> seed('spam')
        >>> a = random_poly(2)
        >>> seed('spam')
        >>> random_poly(2) == a
        True
    """
    yop.random.seed(value)


# Polynomials.
def random_poly(
    degree: int,
    bound: int = 3,
    gen=N,
    positive: bool = False
) -> Poly:
    """A polynomial of the given degree with integer coefficients.

    :param degree: The degree. The leading coefficient is nonzero.
    :param bound: The largest coefficient size.
    :param gen: The variable.
    :param positive: Whether every coefficient is positive, which
        keeps the roots off the positive reals.
    :return: The polynomial.
    :rtype: sympy.Poly
    """
    lo = 1 if positive else -bound
    coeffs = [roll_between(lo, bound) for _ in range(degree)]
    lead = roll_between(1, bound)
    if not positive and roll_between(0, 1):
        lead = -lead
    return make_poly(coeffs + [lead], gen)


def random_ratfun(degree: int = 3, den_degree: int = 1, bound: int = 3) -> RatFun:
    """A rational function in x with no pole on the positive reals."""
    num = random_poly(roll_between(0, degree), bound, X)
    den = random_poly(roll_between(0, den_degree), bound, X, positive=True)
    return RatFun(num, den)


# Log-polynomials.
def random_logpoly(
    max_shift: int = 2,
    max_log_degree: int = 2,
    max_coeff_degree: int = 3,
    terms: int = 3
) -> LogPoly:
    """A nonzero polynomial in log(x), ..., log(x + max_shift).

    :param max_shift: The largest shift d, so the width is d + 1.
    :param max_log_degree: The largest total degree in the logs.
    :param max_coeff_degree: The largest numerator degree of a
        coefficient.
    :param terms: How many terms are drawn. Repeats add up.
    :return: The log-polynomial.
    :rtype: holoscope.analysis.LogPoly
    """
    width = max_shift + 1
    result = LogPoly.constant(width, 0)
    for _ in range(terms):
        vector = [0] * width
        for _ in range(roll_between(0, max_log_degree)):
            vector[roll_between(0, max_shift)] += 1
        coeff = random_ratfun(max_coeff_degree)
        result = result + LogPoly(width, {tuple(vector): coeff})
    if result.is_zero or not result.has_logs:
        result = result + LogPoly.log(width, roll_between(0, max_shift))
    return result


# Recurrences.
def random_recurrence(
    max_order: int = 2,
    max_degree: int = 2,
    bound: int = 3
) -> Recurrence:
    """A recurrence over the rationals whose leading coefficient has
    no root at a positive integer, so it unrolls from any start.
    """
    order = roll_between(1, max_order)
    coeffs = [
        random_poly(roll_between(0, max_degree), bound)
        for _ in range(order)
    ]
    coeffs.append(random_poly(roll_between(0, max_degree), bound, positive=True))
    return make_recurrence(coeffs)


def random_initial(order: int, bound: int = 5) -> list[Fraction]:
    """Initial values for an order `order` recurrence."""
    return [roll_fraction(bound) for _ in range(order)]


# Decompositions.
def random_decomposition(
    max_r_degree: int = 2,
    max_factors: int = 2,
    integral: Optional[bool] = None
) -> Decomposition:
    """A decomposition exp(r) * prod((x + a_i) ** c_i) with distinct
    positive a_i.

    :param max_r_degree: The largest degree of the polynomial r.
    :param max_factors: The largest number of factors.
    :param integral: Force integer exponents when true and proper
        fractions when false. Mixed when not given.
    :return: The decomposition.
    :rtype: holoscope.model.Decomposition
    """
    r = RatFun(random_poly(roll_between(0, max_r_degree), 2, X))
    shifts = list(range(1, 5))
    factors = []
    for _ in range(roll_between(0, max_factors)):
        a = roll_choice(shifts)
        shifts.remove(a)
        if integral is None:
            den = roll_choice([1, 2, 3])
        else:
            den = 1 if integral else roll_choice([2, 3])
        num = roll_between(1, 3) * roll_choice([-1, 1])
        if den > 1 and num % den == 0:
            num += 1
        base = RatFun(make_poly([a, 1], X))
        factors.append(Factor(base, Fraction(num, den)))
    factors.sort(key=lambda f: str(f.base))
    return Decomposition(r, tuple(factors))


__all__ = [
    'random_decomposition', 'random_initial', 'random_logpoly',
    'random_poly', 'random_ratfun', 'random_recurrence', 'seed',
]
