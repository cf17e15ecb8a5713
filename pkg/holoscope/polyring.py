"""
polyring
~~~~~~~~

Exact polynomial and rational function arithmetic over the rationals
extended by declared symbolic constants, with Sturm root counting,
resultants and nullspaces.

Polynomials are :class:`sympy.Poly` objects over a field: either
:data:`sympy.QQ` or the fraction field of the declared constants.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, inf, lcm
from typing import Any, Callable, Optional, Sequence, TypeVar, Union

import sympy
from sympy import QQ, Poly, Symbol

from holoscope.errors import BaseNotPositive, DomainViolation, ZeroPolynomial
from holoscope.exactnum import Ball
from holoscope.model import Independent, Relation


# Common data.
N = Symbol('n')
X = Symbol('x')


# Types.
Number = Union[int, Fraction]
Bound = Union[int, Fraction, float]
T = TypeVar('T')
Rule = Callable[[int], Ball]


# Conversions.
def to_fraction(value: Any) -> Fraction:
    """Convert an exact rational from sympy, gmpy or the standard
    library into a :class:`fractions.Fraction`.

    Usage:

        >>> to_fraction(sympy.Rational(3, 4))
        Fraction(3, 4)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if hasattr(value, 'p') and hasattr(value, 'q'):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, 'numerator') and hasattr(value, 'denominator'):
        return Fraction(int(value.numerator), int(value.denominator))
    value = sympy.nsimplify(value)
    if not value.is_Rational:
        msg = f'{value} is not a rational number.'
        raise ValueError(msg)
    return Fraction(int(value.p), int(value.q))


def to_rational(value: Number) -> sympy.Rational:
    """Convert a rational into a sympy number."""
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


# Constant fields.
@dataclass(frozen=True)
class Constant:
    """A declared symbolic constant.

    :param name: The name used in expressions.
    :param rule: A function giving a ball for the constant at a
        precision, or `None` for a purely symbolic constant.
    """
    name: str
    rule: Optional[Rule] = field(default=None, compare=False, hash=False)

    @property
    def symbol(self) -> Symbol:
        return Symbol(self.name, positive=True)


@dataclass(frozen=True)
class ConstField:
    """The rationals extended by algebraically independent constants.

    :param constants: The declared generators.
    """
    constants: tuple[Constant, ...] = ()

    def __str__(self) -> str:
        if not self.constants:
            return 'QQ'
        names = ', '.join(c.name for c in self.constants)
        return f'QQ({names})'

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(c.symbol for c in self.constants)

    @property
    def is_rational(self) -> bool:
        return not self.constants

    @property
    def domain(self) -> Any:
        """The sympy domain of the field's elements."""
        if not self.constants:
            return QQ
        return QQ.frac_field(*self.symbols)

    def element(self, value: Any) -> sympy.Expr:
        """Bring a sympy expression in the generators to normal form."""
        return sympy.cancel(sympy.sympify(value))

    def join(self, other: 'ConstField') -> 'ConstField':
        """The smallest field holding both fields' generators."""
        names = {c.name for c in self.constants}
        extra = tuple(c for c in other.constants if c.name not in names)
        if not extra:
            return self
        merged = sorted(self.constants + extra, key=lambda c: c.name)
        return ConstField(tuple(merged))

    def rule(self, name: str) -> Optional[Rule]:
        for constant in self.constants:
            if constant.name == name:
                return constant.rule
        return None

    def ball(self, value: Any, prec: int) -> Ball:
        """Enclose an element of the field in a ball.

        :param value: A sympy expression in the generators.
        :param prec: The working precision in bits.
        :return: The enclosure.
        :rtype: holoscope.exactnum.Ball
        """
        value = sympy.sympify(value)
        if value.is_Rational:
            return Ball.exact(to_fraction(value), prec)
        if value.is_Symbol:
            rule = self.rule(value.name)
            if rule is None:
                msg = f'The constant {value.name} has no numeric value.'
                raise DomainViolation(msg)
            return rule(prec)
        if value.is_Add:
            parts = [self.ball(arg, prec) for arg in value.args]
            return reduce(lambda a, b: a + b, parts)
        if value.is_Mul:
            parts = [self.ball(arg, prec) for arg in value.args]
            return reduce(lambda a, b: a * b, parts)
        if value.is_Pow and value.exp.is_Integer:
            return self.ball(value.base, prec) ** int(value.exp)
        msg = f'Cannot evaluate {value} in {self}.'
        raise DomainViolation(msg)


QQ_FIELD = ConstField()


# Polynomial construction.
def make_poly(
    value: Any,
    gen: Symbol = N,
    cfield: ConstField = QQ_FIELD
) -> Poly:
    """Build a polynomial over the field in one variable.

    :param value: A sympy expression, number, or coefficient list
        given from the constant term up.
    :param gen: The variable.
    :param cfield: The constant field of the coefficients.
    :return: The polynomial.
    :rtype: sympy.Poly

    Usage:

        >>> make_poly([1, 2]).as_expr()
        2*n + 1
    """
    if isinstance(value, Poly):
        return Poly(value.as_expr(), gen, domain=cfield.domain)
    if isinstance(value, (list, tuple)):
        value = sum(
            (sympy.sympify(to_rational(c) if isinstance(c, Fraction) else c)
             * gen ** i
             for i, c in enumerate(value)),
            sympy.Integer(0)
        )
    elif isinstance(value, Fraction):
        value = to_rational(value)
    return Poly(value, gen, domain=cfield.domain)


def shift_poly(p: Poly, k: Number) -> Poly:
    """Substitute gen + k for gen."""
    return p.compose(Poly(p.gen + to_rational(k), p.gen, domain=p.domain))


def affine_poly(p: Poly, a: Number, b: Number) -> Poly:
    """Substitute a*gen + b for gen."""
    inner = to_rational(a) * p.gen + to_rational(b)
    return p.compose(Poly(inner, p.gen, domain=p.domain))


def fraction_coeffs(p: Poly) -> list[Fraction]:
    """The coefficients of a rational polynomial from the constant
    term up, as :class:`fractions.Fraction`.
    """
    return [to_fraction(c) for c in reversed(p.all_coeffs())]


def eval_coeffs(coeffs: Sequence[Fraction], value: Number) -> Fraction:
    """Evaluate a coefficient list by Horner's rule."""
    result = Fraction(0)
    for c in reversed(coeffs):
        result = result * value + c
    return result


def eval_poly(p: Poly, value: Number) -> Fraction:
    """Evaluate a rational polynomial at a rational point exactly."""
    return eval_coeffs(fraction_coeffs(p), Fraction(value))


# Rational functions.
class RatFun:
    """A rational function num/den in one variable over a constant
    field, stored with coprime parts and a monic denominator.

    :param num: The numerator.
    :param den: (Optional.) The denominator. It defaults to one.
    """
    __slots__ = ('num', 'den')

    def __init__(self, num: Poly, den: Optional[Poly] = None) -> None:
        num = num.to_field()
        if den is None:
            den = Poly(1, num.gen, domain=num.domain)
        den = den.to_field()
        if den.is_zero:
            msg = 'Rational function with a zero denominator.'
            raise ZeroDivisionError(msg)
        if num.domain != den.domain:
            num, den = num.unify(den)
        if num.is_zero:
            den = Poly(1, num.gen, domain=num.domain)
        else:
            common = num.gcd(den)
            if common.degree() > 0:
                num = num.exquo(common)
                den = den.exquo(common)
            lead = den.LC()
            if lead != 1:
                num = num.quo_ground(lead)
                den = den.monic()
        self.num = num
        self.den = den

    def __repr__(self) -> str:
        cls = self.__class__.__name__
        return f'{cls}({self.as_expr()})'

    def __str__(self) -> str:
        return str(self.as_expr())

    # Constructors.
    @classmethod
    def const(
        cls,
        value: Any,
        gen: Symbol = N,
        cfield: ConstField = QQ_FIELD
    ) -> 'RatFun':
        return cls(make_poly(value, gen, cfield))

    @classmethod
    def from_expr(
        cls,
        value: Any,
        gen: Symbol = X,
        cfield: ConstField = QQ_FIELD
    ) -> 'RatFun':
        """Build a rational function from a sympy expression."""
        num, den = sympy.fraction(sympy.cancel(sympy.sympify(value)))
        return cls(
            Poly(num, gen, domain=cfield.domain),
            Poly(den, gen, domain=cfield.domain)
        )

    # Properties.
    @property
    def gen(self) -> Symbol:
        return self.num.gen

    @property
    def domain(self) -> Any:
        return self.num.domain

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_poly(self) -> bool:
        return self.den.degree() == 0

    @property
    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def as_expr(self) -> sympy.Expr:
        return self.num.as_expr() / self.den.as_expr()

    def constant_value(self) -> Any:
        """The value of a constant rational function as a field
        element.
        """
        if not self.is_constant:
            msg = f'{self} is not constant.'
            raise ValueError(msg)
        return self.num.as_expr()

    # Comparison.
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_constant and self.num.as_expr() == to_rational(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        return (
            self.num.as_expr() == other.num.as_expr()
            and self.den.as_expr() == other.den.as_expr()
        )

    def __hash__(self) -> int:
        return hash((self.num.as_expr(), self.den.as_expr()))

    def __bool__(self) -> bool:
        return not self.num.is_zero

    # Arithmetic.
    def _coerce(self, other: Any) -> 'RatFun':
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun(other)
        if isinstance(other, Fraction):
            other = to_rational(other)
        return RatFun(Poly(other, self.gen, domain=self.domain))

    def __neg__(self) -> 'RatFun':
        return RatFun(-self.num, self.den)

    def __add__(self, other: Any) -> 'RatFun':
        other = self._coerce(other)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(
            self.num * other.den + other.num * self.den,
            self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'RatFun':
        return self + -self._coerce(other)

    def __rsub__(self, other: Any) -> 'RatFun':
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> 'RatFun':
        other = self._coerce(other)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> 'RatFun':
        other = self._coerce(other)
        if other.is_zero:
            msg = 'Division by the zero rational function.'
            raise ZeroDivisionError(msg)
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: Any) -> 'RatFun':
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> 'RatFun':
        if exponent < 0:
            return RatFun(self.den ** -exponent, self.num ** -exponent)
        return RatFun(self.num ** exponent, self.den ** exponent)

    # Calculus and substitution.
    def shift(self, k: Number) -> 'RatFun':
        """Substitute gen + k for gen."""
        inner = Poly(self.gen + to_rational(k), self.gen, domain=self.domain)
        return self.compose(inner)

    def compose(self, inner: Poly) -> 'RatFun':
        """Substitute a polynomial for the variable."""
        return RatFun(self.num.compose(inner), self.den.compose(inner))

    def diff(self) -> 'RatFun':
        num = self.num.diff() * self.den - self.num * self.den.diff()
        return RatFun(num, self.den ** 2)

    def with_domain(self, cfield: ConstField) -> 'RatFun':
        """The same function with coefficients in a larger field."""
        return RatFun(
            Poly(self.num.as_expr(), self.gen, domain=cfield.domain),
            Poly(self.den.as_expr(), self.gen, domain=cfield.domain)
        )

    # Evaluation.
    def eval_exact(self, value: Number) -> Fraction:
        """Evaluate a function over the rationals at a rational point.

        :param value: The point.
        :return: The value.
        :rtype: fractions.Fraction
        """
        if self.domain != QQ:
            msg = f'{self} does not have rational coefficients.'
            raise ValueError(msg)
        den = eval_poly(self.den, value)
        if not den:
            msg = f'{self} has a pole at {value}.'
            raise ZeroDivisionError(msg)
        return eval_poly(self.num, value) / den

    def eval_ball(self, value: Number, prec: int, cfield: ConstField) -> Ball:
        """Enclose the value at a rational point in a ball."""
        if self.domain == QQ:
            return Ball.exact(self.eval_exact(value), prec)
        point = to_rational(value)
        num = cfield.ball(self.num.as_expr().subs(self.gen, point), prec)
        den = cfield.ball(self.den.as_expr().subs(self.gen, point), prec)
        return num / den


# Real roots.
def _sign_at(p: Poly, point: Bound) -> int:
    if point in (inf, -inf):
        if p.is_zero:
            return 0
        lead = 1 if to_fraction(p.LC()) > 0 else -1
        if point == -inf and p.degree() % 2:
            lead = -lead
        return lead
    value = eval_poly(p, point)
    return (value > 0) - (value < 0)


def _variations(chain: Sequence[Poly], point: Bound) -> int:
    signs = [s for s in (_sign_at(p, point) for p in chain) if s]
    return sum(a != b for a, b in zip(signs, signs[1:]))


def sturm_count(p: Poly, lo: Bound = -inf, hi: Bound = inf) -> int:
    """Count the distinct real roots of a rational polynomial in the
    half-open interval (lo, hi].

    :param p: The polynomial.
    :param lo: The lower end, or `-math.inf`.
    :param hi: The upper end, or `math.inf`.
    :return: The number of distinct roots.
    :rtype: int

    Usage:

        >>> sturm_count(make_poly([-2, 0, 1], X), 0, 2)
        1
        >>> sturm_count(make_poly([1, 0, 1], X))
        0
    """
    if p.is_zero:
        msg = 'sturm_count needs a nonzero polynomial.'
        raise ZeroPolynomial(msg)
    if p.domain != QQ:
        p = Poly(p.as_expr(), p.gen, domain=QQ)
    if lo != -inf:
        lo = Fraction(lo)
    if hi != inf:
        hi = Fraction(hi)
    if lo >= hi:
        return 0
    squarefree = p.sqf_part()
    if squarefree.degree() < 1:
        return 0
    chain = squarefree.sturm()
    return _variations(chain, lo) - _variations(chain, hi)


def count_roots_on_ray(p: Poly, x0: Number) -> int:
    """Count the distinct real roots of p in [x0, oo)."""
    count = sturm_count(p, x0, inf)
    if p.domain != QQ:
        p = Poly(p.as_expr(), p.gen, domain=QQ)
    if not eval_poly(p, x0):
        count += 1
    return count


def integer_roots(p: Poly) -> list[int]:
    """The integer roots of a polynomial, ascending.

    Coefficients may involve the declared constants; only roots that
    are integers for every value of the constants are returned.
    """
    if p.is_zero:
        msg = 'integer_roots needs a nonzero polynomial.'
        raise ZeroPolynomial(msg)
    gen = p.gen
    num, _ = sympy.fraction(sympy.together(p.as_expr()))
    if gen not in num.free_symbols:
        return []
    _, factors = sympy.factor_list(num)
    roots = set()
    for factor, _ in factors:
        if factor.free_symbols != {gen}:
            continue
        linear = Poly(factor, gen)
        if linear.degree() != 1:
            continue
        a, b = linear.all_coeffs()
        root = -sympy.Rational(b) / sympy.Rational(a)
        if root.is_Integer:
            roots.add(int(root))
    return sorted(roots)


def largest_integer_root(p: Poly) -> Optional[int]:
    """The largest integer root of a polynomial, if any.

    Usage:

        >>> largest_integer_root(make_poly([-6, 1, 1]))
        2
    """
    roots = integer_roots(p)
    return roots[-1] if roots else None


# Resultants and products.
def resultant(a: Any, b: Any, y: Symbol, gen: Symbol = X) -> RatFun:
    """The resultant of two polynomials in y whose coefficients are
    rational functions of gen.

    :param a: The first polynomial, as a sympy expression or Poly.
    :param b: The second polynomial.
    :param y: The variable eliminated.
    :param gen: The variable left in the result.
    :return: The Sylvester determinant with respect to y.
    :rtype: holoscope.polyring.RatFun

    Usage:

        >>> y = Symbol('y')
        >>> resultant(y - X, y**2 - X, y)
        RatFun(x**2 - x)
    """
    if isinstance(a, Poly):
        a = a.as_expr()
    if isinstance(b, Poly):
        b = b.as_expr()
    a, b = sympy.sympify(a), sympy.sympify(b)
    if a == 0 and b == 0:
        msg = 'resultant needs at least one nonzero polynomial.'
        raise ZeroPolynomial(msg)
    value = sympy.resultant(sympy.together(a), sympy.together(b), y)
    return RatFun.from_expr(value, gen)


def rising_factorial(base: Poly, k: int) -> Poly:
    """The product base (base + 1) ... (base + k - 1).

    Usage:

        >>> rising_factorial(make_poly([0, 1], X), 3).as_expr()
        x**3 + 3*x**2 + 2*x
    """
    if k < 0:
        msg = f'rising_factorial needs k >= 0, not {k}.'
        raise ValueError(msg)
    result = Poly(1, base.gen, domain=base.domain)
    for j in range(k):
        result = result * (base + j)
    return result


# Linear algebra over exact fields.
def solve_nullspace(
    rows: Sequence[Sequence[T]],
    ncols: int,
    zero: T,
    one: T
) -> list[list[T]]:
    """A basis of the right nullspace of a matrix over an exact field.

    The field may be the rationals or rational functions: elements
    need arithmetic, division and truth testing.

    :param rows: The matrix rows.
    :param ncols: The number of columns.
    :param zero: The field's zero.
    :param one: The field's one.
    :return: One basis vector per free column, with a one in that
        column.
    :rtype: list
    """
    matrix = [list(row) for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c]), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][c]
        matrix[r] = [entry / lead for entry in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c]:
                factor = matrix[i][c]
                matrix[i] = [
                    a - factor * b for a, b in zip(matrix[i], matrix[r])
                ]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break

    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vector = [zero] * ncols
        vector[free] = one
        for i, c in enumerate(pivots):
            vector[c] = -matrix[i][free]
        basis.append(vector)
    return basis


def determinant(rows: Sequence[Sequence[T]], zero: T, one: T) -> T:
    """The determinant of a square matrix over an exact field."""
    matrix = [list(row) for row in rows]
    size = len(matrix)
    result = one
    for c in range(size):
        pivot = next((i for i in range(c, size) if matrix[i][c]), None)
        if pivot is None:
            return zero
        if pivot != c:
            matrix[c], matrix[pivot] = matrix[pivot], matrix[c]
            result = -result
        lead = matrix[c][c]
        result = result * lead
        for i in range(c + 1, size):
            if matrix[i][c]:
                factor = matrix[i][c] / lead
                matrix[i] = [
                    a - factor * b for a, b in zip(matrix[i], matrix[c])
                ]
    return result


def _normalize_vector(vector: Sequence[RatFun]) -> list[RatFun]:
    """Clear denominators, remove polynomial and rational content, and
    fix the sign of a nullspace vector.
    """
    gen, domain = vector[0].gen, vector[0].domain
    den = reduce(lambda a, b: a.lcm(b), (v.den for v in vector))
    polys = [v.num * den.exquo(v.den) for v in vector]
    nonzero = [p for p in polys if not p.is_zero]
    common = reduce(lambda a, b: a.gcd(b), nonzero)
    polys = [p.exquo(common) for p in polys]
    first = next(p for p in polys if not p.is_zero)

    if domain == QQ:
        coeffs = [to_fraction(c) for p in polys for c in p.coeffs()]
        scale = Fraction(
            reduce(lcm, (c.denominator for c in coeffs), 1),
            reduce(gcd, (c.numerator for c in coeffs), 0)
        )
        if to_fraction(first.LC()) < 0:
            scale = -scale
        polys = [p.mul_ground(to_rational(scale)) for p in polys]
    else:
        lead = first.LC()
        polys = [p.quo_ground(lead) for p in polys]

    return [RatFun(Poly(p.as_expr(), gen, domain=domain)) for p in polys]


def ratfun_nullspace(matrix: Sequence[Sequence[RatFun]]) -> list[list[RatFun]]:
    """A basis of the right nullspace of a matrix of rational
    functions, each vector cleared of denominators and content.

    :param matrix: The rows of the matrix.
    :return: The basis. It is empty when the nullspace is trivial.
    :rtype: list

    Usage:

        >>> one, n = RatFun.const(1), RatFun(make_poly([0, 1]))
        >>> ratfun_nullspace([[one, n], [one * 2, n * 2]])
        [[RatFun(n), RatFun(-1)]]
    """
    if not matrix or not matrix[0]:
        return []
    sample = matrix[0][0]
    ncols = len(matrix[0])
    zero = RatFun(Poly(0, sample.gen, domain=sample.domain))
    one = RatFun(Poly(1, sample.gen, domain=sample.domain))
    basis = solve_nullspace(matrix, ncols, zero, one)
    return [_normalize_vector(vector) for vector in basis]


# Multiplicative independence.
def prime_exponents(value: Fraction) -> dict[int, int]:
    exponents = dict(sympy.factorint(value.numerator))
    for prime, power in sympy.factorint(value.denominator).items():
        exponents[prime] = exponents.get(prime, 0) - power
    return {int(p): int(e) for p, e in exponents.items()}


def mult_independence(bases: Sequence[Number]) -> Union[Independent, Relation]:
    """Decide whether positive rationals are multiplicatively
    independent.

    :param bases: The positive rational bases.
    :return: :class:`Independent`, or a :class:`Relation` whose
        exponents give a product of powers equal to one.
    :rtype: holoscope.model.Independent | holoscope.model.Relation

    Usage:

        >>> mult_independence([2, 8])
        Relation(bases=(Fraction(2, 1), Fraction(8, 1)), exponents=(3, -1))
        >>> mult_independence([6, 10, 15])
        Independent(bases=(Fraction(6, 1), Fraction(10, 1), Fraction(15, 1)))
    """
    bases = tuple(Fraction(b) for b in bases)
    for base in bases:
        if base <= 0:
            msg = f'Base {base} is not a positive rational.'
            raise BaseNotPositive(msg)
    if not bases:
        return Independent(bases)

    factored = [prime_exponents(b) for b in bases]
    primes = sorted({p for exps in factored for p in exps})
    if not primes:
        exponents = [0] * len(bases)
        exponents[0] = 1
        return Relation(bases, tuple(exponents))

    matrix = sympy.Matrix([
        [exps.get(p, 0) for exps in factored] for p in primes
    ])
    nullspace = matrix.nullspace()
    if not nullspace:
        return Independent(bases)

    vector = [sympy.Rational(v) for v in nullspace[0]]
    scale = reduce(lcm, (int(v.q) for v in vector), 1)
    ints = [int(v * scale) for v in vector]
    common = reduce(gcd, ints, 0)
    ints = [v // common for v in ints]
    first = next(v for v in ints if v)
    if first < 0:
        ints = [-v for v in ints]
    return Relation(bases, tuple(ints))
