"""
exactnum
~~~~~~~~

Exact rationals, dyadic midpoint-radius balls, and certified
evaluation of the constants and special functions sequences need.

Every ball operation returns a ball containing the exact image of
every point of its arguments. Centers are dyadic rationals rounded to
the ball's precision; the rounding error goes into the radius, and
radii are rounded up.
"""
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Optional, Sequence, Union

from mpmath import libmp

from holoscope.constants import GUARD_BITS
from holoscope.errors import DomainViolation, PrecisionExhausted
from holoscope.init import effective_cap


# Types.
Rational = Fraction
Real = Union[int, Fraction, 'Ball']


# Common data.
RADIUS_BITS = 30
ZETA_DIRECT_TERMS = 4096


# Dyadic rounding.
def round_dyadic(q: Fraction, prec: int, mode: str = 'nearest') -> Fraction:
    """Round a rational to a dyadic rational with about `prec`
    significant bits.

    :param q: The value to round.
    :param prec: The number of significant bits to keep.
    :param mode: One of `nearest`, `floor`, `ceil`.
    :return: The rounded value as a :class:`fractions.Fraction`.
    :rtype: fractions.Fraction

    Usage:

        >>> round_dyadic(Fraction(1, 3), 4, 'floor')
        Fraction(5, 16)
        >>> round_dyadic(Fraction(1, 3), 4, 'ceil')
        Fraction(11, 32)
    """
    q = Fraction(q)
    if not q:
        return q
    num, den = abs(q.numerator), q.denominator
    shift = prec - (num.bit_length() - den.bit_length())
    if shift >= 0:
        top, bottom = num << shift, den
    else:
        top, bottom = num, den << -shift
    mantissa, rest = divmod(top, bottom)
    if mode == 'nearest':
        mantissa += 2 * rest >= bottom
    elif rest and (mode == 'ceil') == (q > 0):
        mantissa += 1
    if shift >= 0:
        result = Fraction(mantissa, 1 << shift)
    else:
        result = Fraction(mantissa << -shift)
    return result if q > 0 else -result


def round_up(q: Fraction) -> Fraction:
    """Round a nonnegative radius up to a short dyadic value."""
    return round_dyadic(q, RADIUS_BITS, 'ceil')


def dyadic_parts(q: Fraction) -> tuple[int, int]:
    """Split a dyadic rational into an integer mantissa and a power
    of two exponent.

    :param q: A rational whose denominator is a power of two.
    :return: The pair (mantissa, exponent) with q = m * 2**e.
    :rtype: tuple

    Usage:

        >>> dyadic_parts(Fraction(3, 8))
        (3, -3)
    """
    den = q.denominator
    if den & (den - 1):
        msg = f'{q} is not a dyadic rational.'
        raise ValueError(msg)
    if not q:
        return 0, 0
    mantissa, exponent = q.numerator, 1 - den.bit_length()
    while exponent < 0 and not mantissa & 1:
        mantissa >>= 1
        exponent += 1
    while mantissa and not mantissa & 1:
        mantissa >>= 1
        exponent += 1
    return mantissa, exponent


def check_prec(prec: int) -> None:
    """Raise :class:`PrecisionExhausted` when a precision is past the
    cap in force.
    """
    cap = effective_cap()
    if prec > cap:
        msg = f'Precision {prec} exceeds the cap of {cap} bits.'
        raise PrecisionExhausted(msg)


# Balls.
class Ball:
    """A certified enclosure [mid - rad, mid + rad] of a real number.

    :param mid: The dyadic center.
    :param rad: The nonnegative dyadic radius.
    :param prec: The working precision in bits.
    """
    __slots__ = ('mid', 'rad', 'prec')

    def __init__(
        self,
        mid: Fraction,
        rad: Fraction = Fraction(0),
        prec: int = 64
    ) -> None:
        if rad < 0:
            msg = f'Ball radius must be nonnegative, not {rad}.'
            raise ValueError(msg)
        self.mid = Fraction(mid)
        self.rad = Fraction(rad)
        self.prec = prec

    def __repr__(self) -> str:
        cls = self.__class__.__name__
        return f'{cls}({float(self.mid)!r} +/- {float(self.rad):.3g})'

    # Constructors.
    @classmethod
    def exact(cls, value: Union[int, Fraction], prec: int = 64) -> 'Ball':
        """The smallest convenient ball around a rational."""
        return cls.around(Fraction(value), Fraction(0), prec)

    @classmethod
    def around(cls, center: Fraction, error: Fraction, prec: int) -> 'Ball':
        """A ball containing every point within `error` of an exact
        rational `center`.
        """
        mid = round_dyadic(center, prec)
        rad = error + abs(center - mid)
        return cls(mid, round_up(rad) if rad else rad, prec)

    @classmethod
    def from_interval(cls, lo: Fraction, hi: Fraction, prec: int) -> 'Ball':
        """A ball containing the interval [lo, hi]."""
        if lo > hi:
            lo, hi = hi, lo
        mid = round_dyadic((lo + hi) / 2, prec)
        rad = max(hi - mid, mid - lo)
        return cls(mid, round_up(rad) if rad else rad, prec)

    # Properties.
    @property
    def lower(self) -> Fraction:
        return self.mid - self.rad

    @property
    def upper(self) -> Fraction:
        return self.mid + self.rad

    @property
    def is_exact(self) -> bool:
        return not self.rad

    def contains(self, other: Real) -> bool:
        """Whether every point of `other` lies in the ball."""
        if isinstance(other, Ball):
            return self.lower <= other.lower and other.upper <= self.upper
        return self.lower <= other <= self.upper

    def overlaps(self, other: Real) -> bool:
        """Whether the ball shares a point with `other`."""
        if not isinstance(other, Ball):
            other = Ball(Fraction(other))
        return self.lower <= other.upper and other.lower <= self.upper

    def excludes_zero(self) -> bool:
        return self.lower > 0 or self.upper < 0

    def is_positive(self) -> bool:
        return self.lower > 0

    def is_negative(self) -> bool:
        return self.upper < 0

    def parts(self) -> tuple[int, int, int, int]:
        """The center and radius as (mantissa, exponent) pairs."""
        return dyadic_parts(self.mid) + dyadic_parts(self.rad)

    def with_prec(self, prec: int) -> 'Ball':
        """The same enclosure with the center rounded to `prec` bits."""
        return Ball.around(self.mid, self.rad, prec)

    def scale2(self, exponent: int) -> 'Ball':
        """Multiply exactly by 2**exponent."""
        factor = Fraction(2) ** exponent
        return Ball(self.mid * factor, self.rad * factor, self.prec)

    # Arithmetic.
    def _coerce(self, other: Real) -> 'Ball':
        if isinstance(other, Ball):
            return other
        return Ball.exact(other, self.prec)

    def __neg__(self) -> 'Ball':
        return Ball(-self.mid, self.rad, self.prec)

    def __pos__(self) -> 'Ball':
        return self

    def __abs__(self) -> 'Ball':
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return Ball.from_interval(Fraction(0), max(-self.lower, self.upper),
                                  self.prec)

    def __add__(self, other: Real) -> 'Ball':
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return Ball.around(self.mid + other.mid, self.rad + other.rad, prec)

    __radd__ = __add__

    def __sub__(self, other: Real) -> 'Ball':
        return self + -self._coerce(other)

    def __rsub__(self, other: Real) -> 'Ball':
        return self._coerce(other) - self

    def __mul__(self, other: Real) -> 'Ball':
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        center = self.mid * other.mid
        error = (
            abs(self.mid) * other.rad
            + abs(other.mid) * self.rad
            + self.rad * other.rad
        )
        return Ball.around(center, error, prec)

    __rmul__ = __mul__

    def __truediv__(self, other: Real) -> 'Ball':
        other = self._coerce(other)
        if not other.excludes_zero():
            msg = f'Division by a ball that contains zero: {other!r}.'
            raise DomainViolation(msg)
        prec = max(self.prec, other.prec)
        center = self.mid / other.mid
        error = (self.rad + abs(center) * other.rad) / (
            abs(other.mid) - other.rad
        )
        return Ball.around(center, error, prec)

    def __rtruediv__(self, other: Real) -> 'Ball':
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> 'Ball':
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return Ball.exact(1, self.prec) / self ** -exponent
        result = Ball.exact(1, self.prec)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result


def to_ball(value: Real, prec: int) -> Ball:
    """Make a ball of an exact value, or pass a ball through."""
    if isinstance(value, Ball):
        return value
    return Ball.exact(value, prec)


# Conversion to and from mpmath raw values.
def _to_mpf(q: Fraction) -> tuple:
    mantissa, exponent = dyadic_parts(q)
    return libmp.from_man_exp(mantissa, exponent)


def _from_mpf(value: tuple) -> Fraction:
    sign, mantissa, exponent, _ = value
    mantissa, exponent = int(mantissa), int(exponent)
    if not mantissa:
        if value != libmp.fzero:
            msg = 'An elementary function overflowed.'
            raise PrecisionExhausted(msg)
        return Fraction(0)
    if exponent >= 0:
        result = Fraction(mantissa << exponent)
    else:
        result = Fraction(mantissa, 1 << -exponent)
    return -result if sign else result


def _widen(lo: Fraction, hi: Fraction, wprec: int) -> tuple[Fraction, Fraction]:
    """Move both endpoints outward by one unit in the last place."""
    return (
        lo - abs(lo) / (1 << (wprec - 1)),
        hi + abs(hi) / (1 << (wprec - 1)),
    )


def _monotone(
    fn: Callable,
    x: Ball,
    prec: int,
    increasing: bool = True
) -> Ball:
    """Evaluate a monotone function at the endpoints of a ball with
    directed rounding.
    """
    wprec = prec + GUARD_BITS
    lo_arg, hi_arg = x.lower, x.upper
    if not increasing:
        lo_arg, hi_arg = hi_arg, lo_arg
    lo = _from_mpf(fn(_to_mpf(lo_arg), wprec, libmp.round_floor))
    hi = _from_mpf(fn(_to_mpf(hi_arg), wprec, libmp.round_ceiling))
    lo, hi = _widen(lo, hi, wprec)
    return Ball.from_interval(lo, hi, prec)


def _lipschitz(fn: Callable, x: Ball, prec: int) -> Ball:
    """Evaluate a function with derivative bounded by one at the
    center, then widen by the argument's radius.
    """
    wprec = prec + GUARD_BITS
    center = _to_mpf(x.mid)
    lo = _from_mpf(fn(center, wprec, libmp.round_floor))
    hi = _from_mpf(fn(center, wprec, libmp.round_ceiling))
    lo, hi = _widen(lo, hi, wprec)
    return Ball.from_interval(lo - x.rad, hi + x.rad, prec)


# Elementary functions.
Primitive = Callable[[Sequence[Ball], Optional[Fraction], int], Ball]
primitives: dict[str, Primitive] = {}


class primitive:
    """A decorator that registers an elementary function with
    :func:`ball_apply`.
    """
    def __init__(self, name: str) -> None:
        self.name = name

    def __call__(self, fn: Primitive) -> Primitive:
        primitives[self.name] = fn
        return fn


def ball_apply(
    fn: str,
    args: Sequence[Real],
    exponent: Optional[Fraction] = None,
    prec: int = 64
) -> Ball:
    """Evaluate an elementary function on balls.

    :param fn: One of `log`, `exp`, `sin`, `cos`, `atan`, `sqrt`,
        `pow`.
    :param args: The argument balls.
    :param exponent: The rational exponent for `pow`.
    :param prec: The working precision in bits.
    :return: A ball containing the image of the arguments.
    :rtype: holoscope.exactnum.Ball

    Usage:

        >>> ball_apply('log', [1], prec=64).contains(0)
        True
        >>> ball_apply('exp', [0], prec=64).contains(1)
        True
    """
    check_prec(prec)
    return _apply(fn, args, exponent, prec)


def _apply(
    fn: str,
    args: Sequence[Real],
    exponent: Optional[Fraction],
    prec: int
) -> Ball:
    balls = [to_ball(arg, prec) for arg in args]
    return primitives[fn](balls, exponent, prec)


@primitive('exp')
def _exp(args: Sequence[Ball], exponent: Optional[Fraction], prec: int) -> Ball:
    return _monotone(libmp.mpf_exp, args[0], prec)


@primitive('log')
def _log(args: Sequence[Ball], exponent: Optional[Fraction], prec: int) -> Ball:
    x = args[0]
    if not x.is_positive():
        msg = f'log needs a strictly positive argument, not {x!r}.'
        raise DomainViolation(msg)
    return _monotone(libmp.mpf_log, x, prec)


@primitive('atan')
def _atan(args: Sequence[Ball], exponent: Optional[Fraction], prec: int) -> Ball:
    return _monotone(libmp.mpf_atan, args[0], prec)


@primitive('sin')
def _sin(args: Sequence[Ball], exponent: Optional[Fraction], prec: int) -> Ball:
    return _lipschitz(libmp.mpf_sin, args[0], prec)


@primitive('cos')
def _cos(args: Sequence[Ball], exponent: Optional[Fraction], prec: int) -> Ball:
    return _lipschitz(libmp.mpf_cos, args[0], prec)


@primitive('sqrt')
def _sqrt(args: Sequence[Ball], exponent: Optional[Fraction], prec: int) -> Ball:
    x = args[0]
    if not x.is_positive():
        msg = f'sqrt needs a strictly positive argument, not {x!r}.'
        raise DomainViolation(msg)
    return _monotone(libmp.mpf_sqrt, x, prec)


@primitive('pow')
def _pow(args: Sequence[Ball], exponent: Optional[Fraction], prec: int) -> Ball:
    x = args[0]
    if exponent is None:
        msg = 'pow needs an exponent.'
        raise ValueError(msg)
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        if exponent < 0 and not x.excludes_zero():
            msg = f'Negative power of a ball containing zero: {x!r}.'
            raise DomainViolation(msg)
        return (x ** int(exponent)).with_prec(prec)
    if not x.is_positive():
        msg = f'Fractional power needs a positive base, not {x!r}.'
        raise DomainViolation(msg)
    if exponent.denominator == 2:
        root = _sqrt([x], None, prec)
        return (root ** exponent.numerator).with_prec(prec)
    wprec = prec + GUARD_BITS
    log_x = _log([x], None, wprec)
    return _exp([log_x * exponent], None, prec)


# Constants.
def pi_ball(prec: int) -> Ball:
    """A ball containing pi.

    Usage:

        >>> pi_ball(64).contains(Fraction(314159, 100000))
        False
    """
    check_prec(prec)
    return _pi(prec)


def _pi(prec: int) -> Ball:
    wprec = prec + GUARD_BITS
    lo = _from_mpf(libmp.mpf_pi(wprec, libmp.round_floor))
    hi = _from_mpf(libmp.mpf_pi(wprec, libmp.round_ceiling))
    lo, hi = _widen(lo, hi, wprec)
    return Ball.from_interval(lo, hi, prec)


def e_ball(prec: int) -> Ball:
    """A ball containing Euler's number."""
    return ball_apply('exp', [1], prec=prec)


# Bernoulli numbers and zeta values.
@lru_cache(maxsize=None)
def bernoulli_exact(m: int) -> Fraction:
    """The Bernoulli number B_m, with B_1 = -1/2.

    :param m: A nonnegative index.
    :return: The exact Bernoulli number.
    :rtype: fractions.Fraction

    Usage:

        >>> bernoulli_exact(4)
        Fraction(-1, 30)
    """
    if m < 0:
        msg = f'Bernoulli numbers need a nonnegative index, not {m}.'
        raise ValueError(msg)
    if m == 0:
        return Fraction(1)
    if m > 1 and m % 2:
        return Fraction(0)
    total = sum(comb(m + 1, k) * bernoulli_exact(k) for k in range(m))
    return -total / (m + 1)


def zeta_even_coeff(n: int) -> Fraction:
    """The rational r with zeta(2n) = r * pi**(2n).

    Usage:

        >>> zeta_even_coeff(1)
        Fraction(1, 6)
        >>> zeta_even_coeff(2)
        Fraction(1, 90)
    """
    if n < 1:
        msg = f'zeta_even_coeff needs n >= 1, not {n}.'
        raise ValueError(msg)
    sign = 1 if n % 2 else -1
    return sign * 2 ** (2 * n - 1) * bernoulli_exact(2 * n) / factorial(2 * n)


def zeta_even_ball(n: int, prec: int) -> Ball:
    """A ball containing zeta(2n), built from pi."""
    check_prec(prec)
    wprec = prec + GUARD_BITS
    value = _pi(wprec) ** (2 * n) * zeta_even_coeff(n)
    return value.with_prec(prec)


def rising(s: int, k: int) -> int:
    """The rising factorial s(s+1)...(s+k-1) of an integer."""
    result = 1
    for j in range(k):
        result *= s + j
    return result


def zeta_tail_bound(s: int, cutoff: int) -> Fraction:
    """Bound the tail sum of l**-s over l > cutoff by the integral
    of t**-s from the cutoff on.
    """
    return Fraction(1, (s - 1) * cutoff ** (s - 1))


def _direct_cutoff(s: int, prec: int) -> Optional[int]:
    """The cutoff where the integral tail bound drops below
    2**-(prec+4), or None when that takes too many terms.
    """
    bits = -(-(prec + 4) // (s - 1))
    if bits > ZETA_DIRECT_TERMS.bit_length() - 1:
        return None
    return 1 << bits


def _partial_zeta(s: int, terms: int, wprec: int) -> Ball:
    total = Ball.exact(0, wprec)
    for ell in range(1, terms + 1):
        total = total + Ball.exact(Fraction(1, ell ** s), wprec)
    return total


def zeta_ball(s: int, prec: int) -> Ball:
    """A ball containing zeta(s) for an integer s >= 2.

    The value is the partial sum up to a cutoff L plus the integral
    tail L**(1-s)/(s-1), which is the radius contribution of the
    tail. When that cutoff would be too large, the tail is expanded
    by Euler-Maclaurin summation: the integral term first, then
    Bernoulli corrections, with the remainder bounded in the radius.

    :param s: The integer argument.
    :param prec: The working precision in bits.
    :return: A ball containing zeta(s).
    :rtype: holoscope.exactnum.Ball

    Usage:

        >>> zeta_ball(3, 64).contains(Fraction(12020569, 10000000))
        False
        >>> zeta_ball(3, 64).overlaps(Ball.exact(Fraction(6, 5), 64))
        False
    """
    if s < 2:
        msg = f'zeta_ball needs an integer argument s >= 2, not {s}.'
        raise DomainViolation(msg)
    check_prec(prec)
    wprec = prec + GUARD_BITS
    target = Fraction(1, 1 << (prec + 4))

    cutoff = _direct_cutoff(s, prec)
    if cutoff is not None:
        partial = _partial_zeta(s, cutoff, wprec + cutoff.bit_length())
        tail = zeta_tail_bound(s, cutoff)
        result = partial + Ball.from_interval(Fraction(0), tail, wprec)
        return result.with_prec(prec)

    terms = max(16, prec // 2)
    while True:
        tail, bound = _euler_maclaurin_tail(s, terms, target)
        if bound is not None:
            break
        terms *= 2
    partial = _partial_zeta(s, terms - 1, wprec + terms.bit_length())
    result = partial + Ball.around(tail, bound, wprec)
    return result.with_prec(prec)


def _euler_maclaurin_tail(
    s: int,
    terms: int,
    target: Fraction
) -> tuple[Fraction, Optional[Fraction]]:
    """Expand the sum of l**-s over l >= terms. Returns the exact
    expansion and a bound on its remainder, or no bound when the
    remainder cannot get below the target with this many terms.
    """
    tail = Fraction(1, (s - 1) * terms ** (s - 1)) + Fraction(1, 2 * terms ** s)
    for m in range(1, terms + 1):
        weight = bernoulli_exact(2 * m) / factorial(2 * m)
        tail += (
            weight
            * rising(s, 2 * m - 1)
            * Fraction(1, terms ** (s + 2 * m - 1))
        )
        remainder = (
            abs(weight)
            * rising(s, 2 * m)
            * Fraction(1, terms ** (s + 2 * m - 1))
            / (s + 2 * m - 1)
        )
        if remainder <= target:
            return tail, remainder
    return tail, None


# Gamma.
def _stirling_threshold(wprec: int) -> int:
    """How large the argument must be for the Stirling series to reach
    the working precision.
    """
    return max(16, wprec * 1104 // 10000 + 3)


def gamma_ball(x: Real, prec: int) -> Ball:
    """A ball containing Gamma(x) for every x in a positive ball.

    The argument is shifted above a threshold with
    Gamma(x) = Gamma(x+m) / (x (x+1) ... (x+m-1)), then log Gamma is
    summed with the Stirling series. The first omitted term bounds
    the remainder for real positive arguments.

    :param x: A strictly positive ball or rational.
    :param prec: The working precision in bits.
    :return: A ball containing Gamma(x).
    :rtype: holoscope.exactnum.Ball

    Usage:

        >>> gamma_ball(5, 64).contains(24)
        True
    """
    check_prec(prec)
    wprec = prec + GUARD_BITS
    x = to_ball(x, wprec)
    if not x.is_positive():
        msg = f'gamma_ball needs a strictly positive argument, not {x!r}.'
        raise DomainViolation(msg)

    threshold = _stirling_threshold(wprec)
    shift = 0
    if x.lower < threshold:
        shift = int(threshold - x.lower) + 1
    z = x + shift
    product = Ball.exact(1, wprec)
    for j in range(shift):
        product = product * (x + j)

    target = Fraction(1, 1 << wprec)
    z_low = z.lower
    series = Ball.exact(0, wprec)
    inverse = 1 / z
    inverse_sq = inverse * inverse
    power = inverse
    k = 1
    while True:
        coeff = bernoulli_exact(2 * k) / (2 * k * (2 * k - 1))
        series = series + power * coeff
        omitted = abs(bernoulli_exact(2 * k + 2)) / (
            (2 * k + 2) * (2 * k + 1) * z_low ** (2 * k + 1)
        )
        if omitted <= target or k > wprec:
            break
        power = power * inverse_sq
        k += 1
    remainder = Ball.from_interval(-omitted, omitted, wprec)

    log_z = _apply('log', [z], None, wprec)
    log_two_pi = _apply('log', [_pi(wprec) * 2], None, wprec)
    log_gamma = (z - Fraction(1, 2)) * log_z - z + log_two_pi / 2
    log_gamma = log_gamma + series + remainder
    value = _apply('exp', [log_gamma], None, wprec) / product
    return value.with_prec(prec)
