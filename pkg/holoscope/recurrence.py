"""
recurrence
~~~~~~~~~~

Linear recurrences with polynomial coefficients,

    p_0(n) a(n) + p_1(n) a(n+1) + ... + p_d(n) a(n+d) = 0,

holding for every n >= valid_from. Includes the sequence oracles
recurrences are checked against, the closure algebra, and the
eventual periodicity of recurrent sequences over a finite set of
values.
"""
from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Any, Optional, Union

from sympy import Poly

from holoscope.errors import (
    AllZero,
    InsufficientTerms,
    NotAnnihilated,
    NullspaceEmpty,
    OracleDomain,
    SingularLeadingCoefficient,
    ZeroFunction
)
from holoscope.exactnum import Ball
from holoscope.model import Annihilation
from holoscope.polyring import (
    N,
    QQ_FIELD,
    ConstField,
    RatFun,
    affine_poly,
    eval_poly,
    fraction_coeffs,
    integer_roots,
    make_poly,
    ratfun_nullspace,
    shift_poly,
    to_fraction,
    to_rational
)


# Types.
Term = Union[Fraction, Ball]


# Recurrences.
@dataclass(frozen=True)
class Recurrence:
    """A linear recurrence with polynomial coefficients in n.

    :param coeffs: The coefficients p_0, ..., p_d.
    :param valid_from: The first index the recurrence holds at.
    :param cfield: The constant field of the coefficients.
    """
    coeffs: tuple[Poly, ...]
    valid_from: int = 1
    cfield: ConstField = field(default=QQ_FIELD)

    def __str__(self) -> str:
        coeffs = ', '.join(format_poly(p) for p in self.coeffs)
        return f'{coeffs} @ {self.valid_from}'

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(max(p.degree(), 0) for p in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return self.cfield.is_rational

    def describe(self) -> str:
        """The recurrence written as an equation.

        Usage:

            >>> describe = make_recurrence([[-2], [1]]).describe()
            >>> describe
            'a(n+1) - 2*a(n) = 0 for n >= 1'
        """
        parts = []
        for k in reversed(range(len(self.coeffs))):
            p = self.coeffs[k]
            if p.is_zero:
                continue
            term = f'a(n+{k})' if k else 'a(n)'
            expr = p.as_expr()
            if expr == 1:
                text = term
            elif expr == -1:
                text = f'-{term}'
            elif expr.is_Add:
                text = f'({format_poly(p)})*{term}'
            else:
                text = f'{format_poly(p)}*{term}'
            parts.append(text)
        joined = ' + '.join(parts).replace('+ -', '- ')
        return f'{joined} = 0 for n >= {self.valid_from}'


def format_poly(p: Poly) -> str:
    """Write a polynomial in the expression grammar."""
    return str(p.as_expr()).replace('**', '^')


def make_recurrence(
    coeffs: Sequence[Any],
    valid_from: int = 1,
    cfield: ConstField = QQ_FIELD,
    normal: bool = True
) -> Recurrence:
    """Build a recurrence from coefficient data.

    :param coeffs: The coefficients p_0, ..., p_d, each a
        :class:`sympy.Poly`, a sympy expression in n, a number, or a
        coefficient list from the constant term up.
    :param valid_from: The first index the recurrence holds at.
    :param cfield: The constant field of the coefficients.
    :param normal: Whether to put the result in normal form.
    :return: The recurrence.
    :rtype: holoscope.recurrence.Recurrence

    Usage:

        >>> str(make_recurrence([[0, 2], [0, 4]]))
        'n, 2*n @ 1'
    """
    polys = tuple(make_poly(c, N, cfield) for c in coeffs)
    rec = Recurrence(polys, max(valid_from, 1), cfield)
    return normalize(rec) if normal else rec


def normalize(rec: Recurrence) -> Recurrence:
    """Put a recurrence in normal form: trailing zero coefficients
    trimmed, rational content removed, and the leading coefficient of
    p_d positive. Over a field of constants p_d is made monic instead.

    :param rec: The recurrence.
    :return: The normalized recurrence.
    :rtype: holoscope.recurrence.Recurrence

    Usage:

        >>> rec = make_recurrence([[0, 1], [1, 1], [0]], normal=False)
        >>> normalize(rec).order
        1
    """
    coeffs = list(rec.coeffs)
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    if not coeffs:
        msg = 'Every coefficient of the recurrence is zero.'
        raise AllZero(msg)

    if rec.cfield.is_rational:
        values = [c for p in coeffs for c in fraction_coeffs(p) if c]
        scale = Fraction(
            reduce(lcm, (c.denominator for c in values), 1),
            reduce(gcd, (c.numerator for c in values), 0)
        )
        if to_fraction(coeffs[-1].LC()) < 0:
            scale = -scale
        factor = to_rational(scale)
        coeffs = [p.mul_ground(factor) for p in coeffs]
    else:
        lead = coeffs[-1].LC()
        coeffs = [p.quo_ground(lead) for p in coeffs]

    return Recurrence(tuple(coeffs), rec.valid_from, rec.cfield)


def leading_roots_bound(rec: Recurrence) -> int:
    """The first index past every integer root of p_d, and at least
    one.
    """
    roots = integer_roots(rec.coeffs[-1])
    return max([1] + [r + 1 for r in roots])


# Sequence oracles.
class SeqOracle:
    """Gives the terms of a sequence, exactly or as balls.

    :param kind: What the oracle is built from: `terms`, `function`,
        `expr`, `interlace` or `catalog`.
    :param exact: Whether terms are exact rationals.
    :param first: The first index with a term.
    :param last: The last index with a term, or `None` when the
        sequence goes on forever.
    """
    kind = 'oracle'
    exact = True
    first = 1
    last: Optional[int] = None

    def term(self, n: int, prec: int = 64) -> Term:
        """The term a(n), exact or as a ball at the precision."""
        raise NotImplementedError

    def __call__(self, n: int, prec: int = 64) -> Term:
        if n < self.first or (self.last is not None and n > self.last):
            raise OracleDomain(n)
        return self.term(n, prec)

    def terms(self, start: int, stop: int, prec: int = 64) -> list[Term]:
        """The terms a(start), ..., a(stop)."""
        return [self(n, prec) for n in range(start, stop + 1)]


class TermsOracle(SeqOracle):
    """The terms of a finite list, such as a b-file.

    :param values: The terms, or (index, term) pairs.
    :param first: The index of the first term when plain terms are
        given.
    """
    kind = 'terms'

    def __init__(
        self,
        values: Sequence[Any],
        first: int = 1
    ) -> None:
        values = list(values)
        if values and isinstance(values[0], tuple):
            first = values[0][0]
            values = [value for _, value in values]
        self.values = [Fraction(value) for value in values]
        self.first = first
        self.last = first + len(self.values) - 1

    def term(self, n: int, prec: int = 64) -> Fraction:
        return self.values[n - self.first]


class FunctionOracle(SeqOracle):
    """The terms of an exact function of the index.

    :param fn: A function from an index to an exact rational.
    :param first: The first index the function is defined at.
    """
    kind = 'function'

    def __init__(
        self,
        fn: Callable[[int], Any],
        first: int = 1
    ) -> None:
        self.fn = fn
        self.first = first
        self._cache: dict[int, Fraction] = {}

    def term(self, n: int, prec: int = 64) -> Fraction:
        if n not in self._cache:
            self._cache[n] = Fraction(self.fn(n))
        return self._cache[n]


class InterlaceOracle(SeqOracle):
    """The periodic interlacement c of m sequences, where
    c(m(k-1) + j + 1) is the k-th term of the j-th sequence.

    :param oracles: The interlaced sequences, each starting at one.
    """
    kind = 'interlace'

    def __init__(self, oracles: Sequence[SeqOracle]) -> None:
        if len(oracles) < 2:
            msg = 'Interlacing needs at least two sequences.'
            raise ValueError(msg)
        self.oracles = tuple(oracles)
        self.exact = all(o.exact for o in oracles)
        lasts = [
            len(self.oracles) * (o.last - 1) + j + 1
            for j, o in enumerate(self.oracles)
            if o.last is not None
        ]
        self.last = min(lasts) if lasts else None

    def term(self, n: int, prec: int = 64) -> Term:
        m = len(self.oracles)
        k, j = divmod(n - 1, m)
        return self.oracles[j](k + 1, prec)


# Checking recurrences.
def _coefficient(
    rec: Recurrence,
    k: int,
    n: int,
    prec: int
) -> Union[Fraction, Ball]:
    p = rec.coeffs[k]
    if rec.cfield.is_rational:
        return eval_poly(p, n)
    return RatFun(p).eval_ball(n, prec, rec.cfield)


def residual(
    rec: Recurrence,
    seq: SeqOracle,
    n: int,
    prec: int = 64
) -> Term:
    """The value p_0(n) a(n) + ... + p_d(n) a(n+d).

    :param rec: The recurrence.
    :param seq: The sequence.
    :param n: The index.
    :param prec: The precision for ball terms.
    :return: An exact rational when the sequence and coefficients are
        exact, otherwise a ball.
    :rtype: fractions.Fraction | holoscope.exactnum.Ball
    """
    if n < rec.valid_from:
        msg = f'The recurrence only holds from {rec.valid_from}, not {n}.'
        raise ValueError(msg)
    exact = seq.exact and rec.cfield.is_rational
    total: Term = Fraction(0) if exact else Ball.exact(0, prec)
    for k, p in enumerate(rec.coeffs):
        if p.is_zero:
            continue
        coeff = _coefficient(rec, k, n, prec)
        total = total + coeff * seq(n + k, prec)
    return total


def annihilates(
    rec: Recurrence,
    seq: SeqOracle,
    start: int,
    stop: int,
    prec: int = 64
) -> Annihilation:
    """Check a recurrence on the indices start through stop.

    :param rec: The recurrence.
    :param seq: The sequence.
    :param start: The first index checked.
    :param stop: The last index checked.
    :param prec: The precision for ball terms.
    :return: The outcome. When terms are balls, holding means that no
        residual excluded zero.
    :rtype: holoscope.model.Annihilation
    """
    start = max(start, rec.valid_from)
    exact = seq.exact and rec.cfield.is_rational
    for n in range(start, stop + 1):
        value = residual(rec, seq, n, prec)
        if isinstance(value, Ball):
            failed = value.excludes_zero()
        else:
            failed = value != 0
        if failed:
            return Annihilation(False, exact, n, value, start, stop)
    return Annihilation(True, exact, None, None, start, stop)


def unroll(
    rec: Recurrence,
    init: Sequence[Any],
    count: int
) -> list[Fraction]:
    """Compute terms forward from initial values.

    :param rec: A recurrence over the rationals.
    :param init: The d terms a(n0), ..., a(n0+d-1), where n0 is the
        recurrence's first valid index.
    :param count: How many terms to return.
    :return: The terms a(n0), ..., a(n0+count-1).
    :rtype: list

    Usage:

        >>> rec = make_recurrence([[-2], [1]])
        >>> [int(v) for v in unroll(rec, [1], 5)]
        [1, 2, 4, 8, 16]
    """
    if not rec.cfield.is_rational:
        msg = 'Only recurrences over the rationals can be unrolled.'
        raise ValueError(msg)
    d = rec.order
    if len(init) != d:
        msg = f'An order {d} recurrence needs {d} initial values.'
        raise ValueError(msg)
    coeffs = [fraction_coeffs(p) for p in rec.coeffs]
    values = [Fraction(v) for v in init]
    n = rec.valid_from
    while len(values) < count:
        lead = _horner(coeffs[d], n)
        if not lead:
            raise SingularLeadingCoefficient(n)
        i = n - rec.valid_from
        total = sum(
            (_horner(coeffs[k], n) * values[i + k] for k in range(d)),
            Fraction(0)
        )
        values.append(-total / lead)
        n += 1
    return values[:count]


def _horner(coeffs: Sequence[Fraction], n: int) -> Fraction:
    result = Fraction(0)
    for c in reversed(coeffs):
        result = result * n + c
    return result


# Closure.
@dataclass
class _ShiftModule:
    """A space of sequences with a basis e_0, ..., e_{D-1} over the
    rational functions in n, closed under the shift, with

        e_b(n+1) = sum over c of matrix[b][c](n) e_c(n).

    :param matrix: The shift matrix.
    :param start: The coordinates of the sequence of interest.
    :param cfield: The constant field.
    """
    matrix: list[list[RatFun]]
    start: list[RatFun]
    cfield: ConstField

    @property
    def dim(self) -> int:
        return len(self.start)

    def step(self, vector: Sequence[RatFun]) -> list[RatFun]:
        """The coordinates of c(n+1) from those of c(n)."""
        shifted = [v.shift(1) for v in vector]
        result = [self._zero() for _ in range(self.dim)]
        for b, value in enumerate(shifted):
            if not value:
                continue
            for c, entry in enumerate(self.matrix[b]):
                if entry:
                    result[c] = result[c] + value * entry
        return result

    def _zero(self) -> RatFun:
        return RatFun.const(0, N, self.cfield)

    def denominators(self) -> list[Poly]:
        return [e.den for row in self.matrix for e in row if e]


def _ratfun(p: Poly, cfield: ConstField) -> RatFun:
    return RatFun(Poly(p.as_expr(), N, domain=cfield.domain))


def _companion(rec: Recurrence, cfield: ConstField) -> _ShiftModule:
    """The shift module of a recurrence, with basis a(n+i) for i < d."""
    d = rec.order
    zero = RatFun.const(0, N, cfield)
    one = RatFun.const(1, N, cfield)
    matrix = [[zero] * d for _ in range(d)]
    for i in range(d - 1):
        matrix[i][i + 1] = one
    if d:
        lead = _ratfun(rec.coeffs[d], cfield)
        for k in range(d):
            matrix[d - 1][k] = -_ratfun(rec.coeffs[k], cfield) / lead
    start = [zero] * d
    if d:
        start[0] = one
    return _ShiftModule(matrix, start, cfield)


def _block_sum(modules: Sequence[_ShiftModule], cfield: ConstField) -> _ShiftModule:
    zero = RatFun.const(0, N, cfield)
    dim = sum(m.dim for m in modules)
    matrix = [[zero] * dim for _ in range(dim)]
    start = []
    offset = 0
    for module in modules:
        for b in range(module.dim):
            for c in range(module.dim):
                matrix[offset + b][offset + c] = module.matrix[b][c]
        start.extend(module.start)
        offset += module.dim
    return _ShiftModule(matrix, start, cfield)


def _kronecker(a: _ShiftModule, b: _ShiftModule, cfield: ConstField) -> _ShiftModule:
    matrix = [
        [a.matrix[i][k] * b.matrix[j][l]
         for k in range(a.dim) for l in range(b.dim)]
        for i in range(a.dim) for j in range(b.dim)
    ]
    start = [x * y for x in a.start for y in b.start]
    return _ShiftModule(matrix, start, cfield)


def _shift_vectors(module: _ShiftModule, count: int) -> list[list[RatFun]]:
    """The coordinates of c(n), ..., c(n+count-1)."""
    vectors = [list(module.start)]
    while len(vectors) < count:
        vectors.append(module.step(vectors[-1]))
    return vectors


def _ansatz(
    module: _ShiftModule,
    bound: int,
    valid_from: int
) -> Recurrence:
    """Find the recurrence of least order among the shifts of the
    module's sequence of interest.
    """
    cfield = module.cfield
    if not module.dim or not any(module.start):
        return make_recurrence([1], valid_from, cfield)

    vectors = [list(module.start)]
    for order in range(1, bound + 1):
        vectors.append(module.step(vectors[-1]))
        rows = [
            [vectors[t][b] for t in range(order + 1)]
            for b in range(module.dim)
        ]
        basis = ratfun_nullspace(rows)
        if basis:
            coeffs = [v.num for v in basis[0]]
            return make_recurrence(coeffs, valid_from, cfield)
    msg = f'No recurrence of order at most {bound} was found.'
    raise NullspaceEmpty(msg)


def _module_valid_from(module: _ShiftModule, floor: int) -> int:
    roots = [r for p in module.denominators() for r in integer_roots(p)]
    return max([floor] + [r + 1 for r in roots])


def _input_floor(rec: Recurrence) -> int:
    return max(rec.valid_from, leading_roots_bound(rec))


def _common_field(recs: Sequence[Recurrence]) -> ConstField:
    return reduce(lambda a, b: a.join(b), (r.cfield for r in recs), QQ_FIELD)


ClosureFn = Callable[..., Recurrence]
closures: dict[str, ClosureFn] = {}


class closure_kind:
    """A decorator that registers a closure construction."""
    def __init__(self, name: str) -> None:
        self.name = name

    def __call__(self, fn: ClosureFn) -> ClosureFn:
        closures[self.name] = fn
        return fn


def closure(kind: str, recs: Sequence[Recurrence], **params: int) -> Recurrence:
    """A recurrence for a combination of sequences.

    :param kind: One of `sum`, `product`, `subsequence`, `interlace`.
    :param recs: The recurrences of the combined sequences: two for
        sums and products, one for subsequences, at least two for
        interlacements.
    :param params: `a` and `b` for the subsequence a(a*n + b).
    :return: A normalized recurrence that annihilates the combination
        of any sequences the inputs annihilate.
    :rtype: holoscope.recurrence.Recurrence

    Usage:

        >>> two, three = make_recurrence([[-2], [1]]), make_recurrence([[-3], [1]])
        >>> str(closure('sum', [two, three]))
        '6, -5, 1 @ 1'
    """
    if kind not in closures:
        msg = f'Unknown closure kind {kind!r}.'
        raise ValueError(msg)
    return closures[kind](recs, **params)


@closure_kind('sum')
def closure_sum(recs: Sequence[Recurrence]) -> Recurrence:
    if len(recs) != 2:
        msg = 'A sum closure takes two recurrences.'
        raise ValueError(msg)
    cfield = _common_field(recs)
    module = _block_sum([_companion(r, cfield) for r in recs], cfield)
    bound = recs[0].order + recs[1].order
    floor = max(_input_floor(r) for r in recs)
    return _ansatz(module, bound, _module_valid_from(module, floor))


@closure_kind('product')
def closure_product(recs: Sequence[Recurrence]) -> Recurrence:
    if len(recs) != 2:
        msg = 'A product closure takes two recurrences.'
        raise ValueError(msg)
    cfield = _common_field(recs)
    a, b = (_companion(r, cfield) for r in recs)
    module = _kronecker(a, b, cfield)
    bound = max(recs[0].order * recs[1].order, 1)
    floor = max(_input_floor(r) for r in recs)
    return _ansatz(module, bound, _module_valid_from(module, floor))


@closure_kind('subsequence')
def closure_subsequence(
    recs: Sequence[Recurrence],
    a: int = 1,
    b: int = 0
) -> Recurrence:
    if len(recs) != 1:
        msg = 'A subsequence closure takes one recurrence.'
        raise ValueError(msg)
    if a < 1 or b < 0:
        msg = f'Subsequence needs a >= 1 and b >= 0, not a={a}, b={b}.'
        raise ValueError(msg)
    rec = recs[0]
    cfield = rec.cfield
    base = _companion(rec, cfield)
    d = rec.order

    # Coordinates of a(m+s) over the basis a(m), ..., a(m+d-1).
    reach = _shift_vectors(base, a + d)
    inner = Poly(a * N + b, N, domain=cfield.domain)
    matrix = [
        [entry.compose(inner) for entry in reach[a + i]]
        for i in range(d)
    ]
    module = _ShiftModule(matrix, list(base.start), cfield)

    floor = _input_floor(rec)
    floor = max(1, -(-(floor - b) // a))
    return _ansatz(module, max(d, 1), _module_valid_from(module, floor))


def stretch(rec: Recurrence, m: int, j: int) -> Recurrence:
    """The recurrence of the sequence that carries the k-th term of a
    sequence at index m(k-1) + j + 1 and zero elsewhere.
    """
    cfield = rec.cfield
    zero = make_poly(0, N, cfield)
    coeffs = [zero] * (m * rec.order + 1)
    for k, p in enumerate(rec.coeffs):
        coeffs[m * k] = affine_poly(p, Fraction(1, m), Fraction(m - j - 1, m))
    floor = m * (_input_floor(rec) - 1) + j + 1
    return Recurrence(tuple(coeffs), floor, cfield)


@closure_kind('interlace')
def closure_interlace(recs: Sequence[Recurrence]) -> Recurrence:
    m = len(recs)
    if m < 2:
        msg = 'An interlace closure takes at least two recurrences.'
        raise ValueError(msg)
    cfield = _common_field(recs)
    stretched = [stretch(r, m, j) for j, r in enumerate(recs)]
    module = _block_sum([_companion(r, cfield) for r in stretched], cfield)
    bound = m * sum(r.order for r in recs)
    floor = max(r.valid_from for r in stretched)
    return _ansatz(module, max(bound, 1), _module_valid_from(module, floor))


# Special recurrences.
def hypergeom_from_ratfun(
    f: RatFun,
    cfield: ConstField = QQ_FIELD
) -> Recurrence:
    """The order one recurrence of the values of a rational function.

    With f = A/B, the recurrence is A(n)B(n+1) a(n+1) - A(n+1)B(n) a(n),
    valid past every integer zero and pole of f.

    :param f: The rational function.
    :param cfield: The constant field of its coefficients.
    :return: The recurrence.
    :rtype: holoscope.recurrence.Recurrence

    Usage:

        >>> from holoscope.polyring import X
        >>> str(hypergeom_from_ratfun(RatFun.from_expr(X)))
        '-n - 1, n @ 1'
    """
    if f.is_zero:
        msg = 'The rational function is identically zero.'
        raise ZeroFunction(msg)
    a = Poly(f.num.as_expr().subs(f.gen, N), N, domain=cfield.domain)
    b = Poly(f.den.as_expr().subs(f.gen, N), N, domain=cfield.domain)
    coeffs = [-shift_poly(a, 1) * b, a * shift_poly(b, 1)]
    roots = integer_roots(a * b) if (a * b).degree() > 0 else []
    valid_from = max([1] + [r + 1 for r in roots])
    return make_recurrence(coeffs, valid_from, cfield)


def gamma_product_recurrence(
    us: Sequence[Any],
    alphas: Sequence[int],
    cfield: ConstField = QQ_FIELD
) -> Recurrence:
    """The order one recurrence of prod(Gamma(n - u_i) ** alpha_i) for
    integer exponents.

    :param us: The shifts u_i, rationals or elements of the field.
    :param alphas: The integer exponents.
    :param cfield: The constant field of the shifts.
    :return: The recurrence D(n) a(n+1) - N(n) a(n), where
        N/D = prod((n - u_i) ** alpha_i).
    :rtype: holoscope.recurrence.Recurrence

    Usage:

        >>> str(gamma_product_recurrence([Fraction(1, 2)], [2]))
        '-4*n^2 + 4*n - 1, 4 @ 1'
    """
    ratio = RatFun.const(1, N, cfield)
    for u, alpha in zip(us, alphas):
        if int(alpha) != alpha:
            msg = f'Exponent {alpha} is not an integer.'
            raise ValueError(msg)
        if isinstance(u, Fraction):
            u = to_rational(u)
        factor = RatFun(make_poly(N - u, N, cfield))
        ratio = ratio * factor ** int(alpha)
    coeffs = [-ratio.num, ratio.den]
    product = ratio.num * ratio.den
    roots = integer_roots(product) if product.degree() > 0 else []
    valid_from = max([1] + [r + 1 for r in roots])
    return make_recurrence(coeffs, valid_from, cfield)


def constant_tail_recurrence(rec: Recurrence) -> Recurrence:
    """The constant coefficient operator sum of b_k S^k, where b_k is
    the coefficient of n^N in p_k and N is the largest degree of the
    p_k. A sequence over finitely many values that the recurrence
    annihilates is eventually annihilated by this operator.

    :param rec: A recurrence over the rationals.
    :return: The operator, with trailing zeros trimmed and the top
        coefficients left as they are.
    :rtype: holoscope.recurrence.Recurrence

    Usage:

        >>> rec = make_recurrence([[1, 0, 1], [0, 0, 2], [0, 0, -3]], normal=False)
        >>> str(constant_tail_recurrence(rec))
        '1, 2, -3 @ 1'
    """
    top = rec.degree
    coeffs = []
    for p in rec.coeffs:
        values = fraction_coeffs(p)
        coeffs.append(values[top] if top < len(values) else Fraction(0))
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if not coeffs:
        msg = 'Every coefficient of the recurrence is zero.'
        raise AllZero(msg)
    polys = tuple(make_poly(c, N, rec.cfield) for c in coeffs)
    return Recurrence(polys, rec.valid_from, rec.cfield)


def eventual_period(
    terms: Sequence[Hashable],
    const_rec: Recurrence,
    first: int = 1
) -> tuple[int, int]:
    """Find the preperiod and period of a sequence over finitely many
    values that a constant coefficient recurrence annihilates.

    The recurrence is checked on the terms first; the last index it
    fails at starts the tail. From there, the state vectors of d
    consecutive terms are watched until one repeats, which happens
    within |V|^d + d terms. The period found is then made minimal and
    the smallest preperiod is read off by replay.

    :param terms: The terms a(first), a(first+1), ...
    :param const_rec: A recurrence with constant coefficients.
    :param first: The index of the first term.
    :return: The pair (preperiod, period) such that
        a(n + period) = a(n) for every given n > preperiod.
    :rtype: tuple

    Usage:

        >>> rec = make_recurrence([[-1], [0], [1]])
        >>> eventual_period([1, 2, 1, 2, 1, 2], rec)
        (0, 2)
    """
    terms = list(terms)
    d = const_rec.order
    coeffs = [to_fraction(p.as_expr()) for p in const_rec.coeffs]
    last = first + len(terms) - 1

    def at(n: int) -> Hashable:
        return terms[n - first]

    # Find where the recurrence starts to hold.
    tail = max(first, const_rec.valid_from)
    for n in range(last - d, tail - 1, -1):
        value = sum(c * Fraction(at(n + k)) for k, c in enumerate(coeffs))
        if value:
            if n == last - d:
                raise NotAnnihilated(n)
            tail = n + 1
            break

    # Watch the states for a repeat.
    seen: dict[tuple, int] = {}
    repeat = None
    for n in range(tail, last - d + 2):
        state = tuple(at(n + k) for k in range(d))
        if state in seen:
            repeat = (seen[state], n - seen[state])
            break
        seen[state] = n
    if repeat is None:
        msg = 'No state repeats within the given terms.'
        raise InsufficientTerms(msg)
    start, span = repeat

    def holds(period: int, since: int) -> bool:
        return all(
            at(n + period) == at(n) for n in range(since, last - period + 1)
        )

    if not holds(span, start):
        raise NotAnnihilated(start)
    period = next(
        p for p in range(1, span + 1) if span % p == 0 and holds(p, start)
    )

    preperiod = 0
    for n in range(last - period, first - 1, -1):
        if at(n + period) != at(n):
            preperiod = n - first + 1
            break
    return preperiod, period
