"""
analysis
~~~~~~~~

Symbolic tests on closed forms: sorting expressions into the classes
the classifier has rules for, singularity witnesses, logarithmic
derivative decompositions and the shift quotient test, polynomials
in shifted logarithms, the reduction of radical expressions, and the
rewriting of exponential polynomials over independent generators.

Constants inside an expression become generators of a constant
field. A constant subtree that is not a rational combination of
other constants, such as `log(2)` or `2^(1/2)`, is a generator named
by its printed form, with a ball rule that evaluates the subtree.
"""
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Callable, Iterator, Optional, Union

import sympy
from sympy import Poly, Symbol
from sympy.polys.polyerrors import BasePolynomialError, NotAlgebraic

from holoscope import expr as ex
from holoscope.errors import (
    NotInClass,
    NotInRing,
    NotRadical,
    UndeclaredConstant,
    UnsupportedDerivative
)
from holoscope.exactnum import Ball, ball_apply, e_ball, pi_ball
from holoscope.model import (
    ClassTag,
    Decomposition,
    ExpGenerator,
    ExpRing,
    Factor,
    ProperAlgebraic,
    RationalForm,
    Relation,
    ShiftQuotient,
    SingularityWitness
)
from holoscope.polyring import (
    QQ_FIELD,
    X,
    Constant,
    ConstField,
    RatFun,
    mult_independence,
    prime_exponents,
    to_fraction,
    to_rational
)
from holoscope.utility import format_fraction


# Common data.
BUILTIN_RULES = {'pi': pi_ball, 'e': e_ball}


# Constants inside expressions.
def _is_opaque(node: ex.Expr) -> bool:
    if isinstance(node, ex.Const):
        return True
    if isinstance(node, (ex.Var, ex.Num)) or ex.has_var(node):
        return False
    if isinstance(node, (ex.Neg,) + ex.Binary):
        return False
    if isinstance(node, ex.Pow) and node.exponent.denominator == 1:
        return False
    return True


def opaque_nodes(e: ex.Expr) -> list[ex.Expr]:
    """The constant subtrees of an expression that act as field
    generators, in order of appearance.
    """
    found: list[ex.Expr] = []

    def visit(node: ex.Expr) -> None:
        if _is_opaque(node):
            if node not in found:
                found.append(node)
            return
        for child in ex.children(node):
            visit(child)

    visit(e)
    return found


def _opaque_symbol(node: ex.Expr) -> Optional[Symbol]:
    if _is_opaque(node):
        return Symbol(ex.show(node), positive=True)
    return None


def field_sympy(e: ex.Expr) -> sympy.Expr:
    """Convert an expression to sympy with its constants as field
    generators.

    Usage:

        >>> field_sympy(ex.mul(ex.Var(), ex.Log(ex.num(2))))
        x*log(2)
    """
    return ex.to_sympy(e, X, symbolic=True, hook=_opaque_symbol)


def expr_field(e: ex.Expr, cfield: ConstField = QQ_FIELD) -> ConstField:
    """The constant field generated by the declared constants and the
    constants an expression uses.

    :param e: The expression.
    :param cfield: The declared constants.
    :return: The field.
    :rtype: holoscope.polyring.ConstField
    """
    declared = {c.name for c in cfield.constants}
    extra = []
    for node in opaque_nodes(e):
        if isinstance(node, ex.Const) and node.name in BUILTIN_RULES:
            extra.append(Constant(node.name, BUILTIN_RULES[node.name]))
        elif isinstance(node, ex.Const):
            if node.name not in declared:
                raise UndeclaredConstant(node.name)
        else:
            rule = ex.constant_rule(node, cfield)
            extra.append(Constant(ex.show(node), rule))
    return cfield.join(ConstField(tuple(extra)))


# Tree shapes.
def is_rational_tree(e: ex.Expr) -> bool:
    """Whether the tree is built from x and constants with rational
    operations and integer powers.
    """
    if not ex.has_var(e) or isinstance(e, ex.Var):
        return True
    if isinstance(e, (ex.Neg,) + ex.Binary):
        return all(is_rational_tree(child) for child in ex.children(e))
    if isinstance(e, ex.Pow):
        return e.exponent.denominator == 1 and is_rational_tree(e.base)
    return False


def is_radical_tree(e: ex.Expr) -> bool:
    """Whether the tree is built from x and constants with rational
    operations and rational powers.
    """
    if not ex.has_var(e) or isinstance(e, ex.Var):
        return True
    if isinstance(e, (ex.Neg,) + ex.Binary):
        return all(is_radical_tree(child) for child in ex.children(e))
    if isinstance(e, ex.Pow):
        return is_radical_tree(e.base)
    return False


def fractional_powers(e: ex.Expr) -> list[ex.Pow]:
    """The powers with a non-integer exponent of bases that depend
    on x.
    """
    return [
        node for node in ex.walk(e)
        if isinstance(node, ex.Pow)
        and node.exponent.denominator != 1
        and ex.has_var(node.base)
    ]


def strip_constant(e: ex.Expr) -> ex.Expr:
    """Remove constant factors and signs around a single factor."""
    while True:
        if isinstance(e, ex.Neg):
            e = e.arg
        elif isinstance(e, ex.Mul) and not ex.has_var(e.left):
            e = e.right
        elif isinstance(e, (ex.Mul, ex.Div)) and not ex.has_var(e.right):
            e = e.left
        else:
            return e


def _product_factors(
    e: ex.Expr,
    exponent: Fraction = Fraction(1)
) -> Iterator[tuple[ex.Expr, Fraction]]:
    """Flatten products, quotients and powers into (factor, exponent)
    pairs.
    """
    if isinstance(e, ex.Mul):
        yield from _product_factors(e.left, exponent)
        yield from _product_factors(e.right, exponent)
    elif isinstance(e, ex.Div):
        yield from _product_factors(e.left, exponent)
        yield from _product_factors(e.right, -exponent)
    elif isinstance(e, ex.Neg):
        yield from _product_factors(e.arg, exponent)
    elif isinstance(e, ex.Pow):
        yield from _product_factors(e.base, exponent * e.exponent)
    else:
        yield e, exponent


def _log_dependent(value: sympy.Expr) -> bool:
    """Whether a log or arctan of something depending on x survives."""
    return any(
        X in node.free_symbols
        for node in value.atoms(sympy.log, sympy.atan)
    )


def _simplified(e: ex.Expr) -> sympy.Expr:
    return sympy.simplify(sympy.expand_log(field_sympy(e), force=True))


def _left_roots(p: sympy.Expr) -> bool:
    """Whether every root of a rational polynomial in x is known and
    has a nonpositive real part.
    """
    if p.free_symbols - {X}:
        return False
    poly = Poly(p, X)
    roots = sympy.roots(poly)
    if sum(roots.values()) != poly.degree():
        return False
    return all(bool(sympy.re(r).evalf() <= 0) for r in roots)


def rational_form(e: ex.Expr, cfield: ConstField = QQ_FIELD) -> RatFun:
    """The rational function an expression equals.

    :param e: The expression.
    :param cfield: The declared constants.
    :return: The rational function in x over the expression's field.
    :rtype: holoscope.polyring.RatFun
    """
    field = expr_field(e, cfield)
    if is_rational_tree(e):
        return RatFun.from_expr(field_sympy(e), X, field)
    if is_radical_tree(e):
        form = algebraic_normalize(e, cfield)
        if isinstance(form, RationalForm):
            return form.value
        msg = f'{ex.show(e)} is a proper algebraic function.'
        raise NotInClass(msg)
    value = _simplified(e)
    if not _log_dependent(value):
        try:
            return RatFun.from_expr(value, X, field)
        except BasePolynomialError:
            pass
    msg = f'{ex.show(e)} is not a rational function.'
    raise NotInClass(msg)


# Classification.
ClassRule = Callable[[ex.Expr, ConstField], Optional[ClassTag]]
class_rules: list[tuple[str, ClassRule]] = []


class class_rule:
    """A decorator that appends a rule to the classification table.
    Rules are tried in the order they are registered.
    """
    def __init__(self, name: str) -> None:
        self.name = name

    def __call__(self, fn: ClassRule) -> ClassRule:
        class_rules.append((self.name, fn))
        return fn


def class_of(e: ex.Expr, cfield: ConstField = QQ_FIELD) -> ClassTag:
    """Sort an expression into the first class whose rule matches.

    :param e: The expression.
    :param cfield: The declared constants.
    :return: The class, `Other` when no rule matches.
    :rtype: holoscope.model.ClassTag

    Usage:

        >>> from holoscope.parser import parse
        >>> class_of(parse('log(x) + x'))
        ClassTag(kind='LogArctan', params=('log',))
        >>> class_of(parse('x^x'))
        ClassTag(kind='PowerSelf', params=(Fraction(1, 1),))
    """
    for _, rule in class_rules:
        tag = rule(e, cfield)
        if tag is not None:
            return tag
    return ClassTag('Other')


@class_rule('zeta')
def _zeta_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    if isinstance(e, ex.Zeta):
        return ClassTag('ZetaArg', (e.a, e.b))
    return None


@class_rule('rational')
def _rational_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    if is_rational_tree(e):
        return ClassTag('Rational')
    return None


@class_rule('radical')
def _radical_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    if not is_radical_tree(e):
        return None
    try:
        form = algebraic_normalize(e, cfield)
    except NotRadical:
        return None
    if isinstance(form, RationalForm):
        return ClassTag('Rational')
    return ClassTag('AlgebraicPower', (form.base, form.exponent))


def gamma_shift(node: ex.Expr) -> Optional[Fraction]:
    """The rational u of a node gamma(x - u)."""
    if not isinstance(node, ex.Gamma):
        return None
    offset = sympy.expand(ex.to_sympy(node.arg) - X)
    if not offset.is_Rational:
        return None
    return -to_fraction(offset)


@class_rule('gamma-product')
def _gamma_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    if not ex.contains(e, ex.Gamma):
        return None
    alphas: dict[Fraction, Fraction] = {}
    for node, exponent in _product_factors(e):
        if not ex.has_var(node):
            continue
        u = gamma_shift(node)
        if u is None:
            return None
        alphas[u] = alphas.get(u, Fraction(0)) + exponent
    us = tuple(sorted(u for u, alpha in alphas.items() if alpha))
    if not us:
        return ClassTag('Rational')
    return ClassTag('GammaProduct', (us, tuple(alphas[u] for u in us)))


def power_self_exponent(e: ex.Expr) -> Optional[sympy.Expr]:
    """The alpha of c * beta**x * x**(alpha*x), or None."""
    core = strip_constant(e)
    if not isinstance(core, ex.Exp) or not ex.contains(core.arg, ex.Log):
        return None
    excluded = (ex.Zeta, ex.Gamma, ex.Exp, ex.Sin, ex.Cos, ex.Atan)
    if ex.contains(core.arg, excluded):
        return None
    h = sympy.expand(sympy.expand_log(ex.to_sympy(core.arg), force=True))
    alpha = sympy.simplify(sympy.diff(h, X, 2) * X)
    if alpha == 0 or X in alpha.free_symbols:
        return None
    rest = sympy.simplify(h - alpha * X * sympy.log(X))
    if not rest.is_polynomial(X) or sympy.degree(rest, X) > 1:
        return None
    return alpha


@class_rule('power-self')
def _power_self_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    alpha = power_self_exponent(e)
    if alpha is None:
        return None
    param = to_fraction(alpha) if alpha.is_Rational else str(alpha)
    return ClassTag('PowerSelf', (param,))


def _log_arctan_parts(e: ex.Expr) -> Optional[set[str]]:
    """The kinds of transcendental nodes in an expression built from
    logs and arctangents of rational functions, or None.
    """
    if not ex.has_var(e) or isinstance(e, ex.Var):
        return set()
    if isinstance(e, ex.Pow) and e.exponent.denominator != 1:
        return None
    if isinstance(e, (ex.Neg, ex.Pow) + ex.Binary):
        parts: set[str] = set()
        for child in ex.children(e):
            found = _log_arctan_parts(child)
            if found is None:
                return None
            parts |= found
        return parts
    if isinstance(e, (ex.Log, ex.Atan)) and is_rational_tree(e.arg):
        return {ex.NAMES[type(e)]}
    if isinstance(e, (ex.Exp, ex.Sin, ex.Cos)) and is_rational_tree(e.arg):
        return {'mixed'}
    return None


@class_rule('log-arctan')
def _log_arctan_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    parts = _log_arctan_parts(e)
    if not parts or not parts & {'log', 'atan'}:
        return None
    if _log_dependent(_simplified(e)):
        return ClassTag('LogArctan', tuple(sorted(parts)))
    if 'mixed' in parts:
        return None
    try:
        rational_form(e, cfield)
    except NotInClass:
        return None
    return ClassTag('Rational')


def trig_slope(core: ex.Expr) -> Optional[ex.Expr]:
    """The constant slope a of sin(a*x + b) or cos(a*x + b)."""
    if not isinstance(core, (ex.Sin, ex.Cos)):
        return None
    try:
        slope = ex.differentiate(core.arg)
    except UnsupportedDerivative:
        return None
    if ex.has_var(slope) or (isinstance(slope, ex.Num) and not slope.value):
        return None
    return slope


@class_rule('trig')
def _trig_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    core = strip_constant(e)
    slope = trig_slope(core)
    if slope is None:
        return None
    name = ex.NAMES[type(core)]
    return ClassTag('ExpPoly', ('conjugate-pair', name, ex.show(slope)))


@class_rule('exp-polynomial')
def _exp_poly_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    ring = exp_ring(e, cfield)
    if ring is None:
        return None
    return ClassTag('ExpPoly', ring.labels)


@class_rule('known')
def _known_rule(e: ex.Expr, cfield: ConstField) -> Optional[ClassTag]:
    ident = known_pattern(e)
    if ident is None:
        return None
    return ClassTag('KnownNonHolonomic', (ident,))


# Known non-holonomic shapes.
def _inverse_type(u: ex.Expr) -> bool:
    """u is rational, bounded at infinity, with a finite pole and no
    pole in the right half plane.
    """
    if not ex.has_var(u) or not is_rational_tree(u):
        return False
    num, den = sympy.fraction(sympy.cancel(sympy.together(field_sympy(u))))
    if X not in den.free_symbols:
        return False
    if sympy.degree(num, X) > sympy.degree(den, X):
        return False
    return _left_roots(den)


def _sublinear_radical(u: ex.Expr) -> bool:
    """u is a proper radical growing slower than x, with branch
    points off the right half plane.
    """
    if is_rational_tree(u) or not is_radical_tree(u):
        return False
    try:
        form = algebraic_normalize(u)
    except NotRadical:
        return False
    if not isinstance(form, ProperAlgebraic):
        return False
    for node in fractional_powers(u):
        value = sympy.cancel(sympy.together(field_sympy(node.base)))
        num, den = sympy.fraction(value)
        if not _left_roots(num):
            return False
        if X in den.free_symbols and not _left_roots(den):
            return False
    return sympy.limit(field_sympy(u) / X, X, sympy.oo) == 0


def _exp_polynomial_tree(e: ex.Expr) -> bool:
    if not ex.has_var(e) or isinstance(e, ex.Var):
        return True
    if isinstance(e, ex.Pow) and e.exponent.denominator != 1:
        return False
    if isinstance(e, (ex.Neg, ex.Pow) + ex.Binary):
        return all(_exp_polynomial_tree(child) for child in ex.children(e))
    if isinstance(e, ex.Exp) and is_rational_tree(e.arg):
        value = sympy.cancel(sympy.together(field_sympy(e.arg)))
        return value.is_polynomial(X)
    return False


def accumulating_denominator(e: ex.Expr) -> Optional[sympy.Expr]:
    """A denominator factor with infinitely many complex zeros: a sum
    involving the exponential of a polynomial of degree two or more.
    """
    if not _exp_polynomial_tree(e):
        return None
    value = sympy.cancel(sympy.together(field_sympy(e)))
    _, den = sympy.fraction(value)
    for factor in sympy.Mul.make_args(sympy.factor(den)):
        base = factor.base if factor.is_Pow else factor
        if not base.is_Add:
            continue
        for node in base.atoms(sympy.exp):
            arg = node.args[0]
            if arg.is_polynomial(X) and sympy.degree(arg, X) >= 2:
                return base
    return None


def known_pattern(e: ex.Expr) -> Optional[str]:
    """The id of a non-holonomic shape an expression has, or None.

    The shapes are exp(u) and exp(exp(u)) with u rational and bounded
    with a finite pole, exp of a radical growing slower than x,
    sin(u) and cos(u) with such u, and quotients whose denominator has
    accumulating zeros.
    """
    core = strip_constant(e)
    if isinstance(core, ex.Exp):
        u = core.arg
        if _inverse_type(u):
            return 'exp-inverse'
        if isinstance(u, ex.Exp) and _inverse_type(u.arg):
            return 'exp-exp-inverse'
        if _sublinear_radical(u):
            return 'exp-radical'
    if isinstance(core, (ex.Sin, ex.Cos)) and _inverse_type(core.arg):
        return 'trig-inverse'
    if accumulating_denominator(e) is not None:
        return 'exp-pole-accumulation'
    return None


# Singularity witnesses.
WitnessRule = Callable[[ex.Expr], Optional[SingularityWitness]]
witness_rules: list[tuple[str, WitnessRule]] = []


class witness_rule:
    """A decorator that appends a rule to the witness table. Earlier
    rules take priority over later ones.
    """
    def __init__(self, name: str) -> None:
        self.name = name

    def __call__(self, fn: WitnessRule) -> WitnessRule:
        witness_rules.append((self.name, fn))
        return fn


def _root_point(p: sympy.Expr) -> str:
    """A root of a polynomial in x: the largest real one if there is
    one, otherwise the first when printed.
    """
    try:
        poly = Poly(p, X)
        roots = list(sympy.roots(poly)) if poly.degree() > 0 else []
    except BasePolynomialError:
        roots = []
    if not roots:
        return f'zeros of {p}'
    real = [r for r in roots if r.is_real]
    if real:
        return str(max(real, key=lambda r: float(sympy.N(r))))
    return sorted(str(r) for r in roots)[0]


def _point(e: ex.Expr, pole: bool = False) -> str:
    """A zero of an expression, or a pole when asked or when the
    numerator is constant.
    """
    num, den = sympy.fraction(sympy.cancel(sympy.together(field_sympy(e))))
    if pole or X not in num.free_symbols:
        return _root_point(den)
    return _root_point(num)


def singularity_witness(e: ex.Expr) -> Optional[SingularityWitness]:
    """Find a point where the function has no meromorphic extension.

    :param e: The expression.
    :return: The witness from the highest priority rule that applies
        to some node, or None when no rule applies.
    :rtype: holoscope.model.SingularityWitness | None

    Usage:

        >>> singularity_witness(ex.Log(ex.Var()))
        SingularityWitness(location='0', nature='branch point', rule='log')
        >>> singularity_witness(ex.Exp(ex.Var())) is None
        True
    """
    nodes = list(ex.walk(e))
    for _, rule in witness_rules:
        for node in nodes:
            witness = rule(node)
            if witness is not None:
                return witness
    return None


@witness_rule('log')
def _log_witness(node: ex.Expr) -> Optional[SingularityWitness]:
    if isinstance(node, ex.Log) and ex.has_var(node.arg):
        return SingularityWitness(_point(node.arg), 'branch point', 'log')
    return None


@witness_rule('atan')
def _atan_witness(node: ex.Expr) -> Optional[SingularityWitness]:
    if not isinstance(node, ex.Atan) or not ex.has_var(node.arg):
        return None
    value = sympy.cancel(sympy.together(field_sympy(node.arg)))
    num, den = sympy.fraction(value)
    location = _root_point(sympy.expand(num - sympy.I * den))
    return SingularityWitness(location, 'branch point', 'atan')


@witness_rule('gamma-power')
def _gamma_witness(node: ex.Expr) -> Optional[SingularityWitness]:
    if (
        isinstance(node, ex.Pow)
        and node.exponent.denominator != 1
        and isinstance(node.base, ex.Gamma)
        and ex.has_var(node.base)
    ):
        location = _point(node.base.arg)
        return SingularityWitness(location, 'branch point', 'gamma-power')
    return None


@witness_rule('fractional-power')
def _power_witness(node: ex.Expr) -> Optional[SingularityWitness]:
    if (
        isinstance(node, ex.Pow)
        and node.exponent.denominator != 1
        and ex.has_var(node.base)
        and not isinstance(node.base, ex.Gamma)
    ):
        location = _point(node.base)
        return SingularityWitness(location, 'branch point', 'fractional-power')
    return None


@witness_rule('exp-pole')
def _exp_witness(node: ex.Expr) -> Optional[SingularityWitness]:
    if isinstance(node, ex.Exp) and _has_pole(node.arg):
        location = _point(node.arg, pole=True)
        return SingularityWitness(location, 'essential', 'exp-pole')
    return None


@witness_rule('trig-pole')
def _trig_witness(node: ex.Expr) -> Optional[SingularityWitness]:
    if isinstance(node, (ex.Sin, ex.Cos)) and _has_pole(node.arg):
        location = _point(node.arg, pole=True)
        return SingularityWitness(location, 'essential', 'trig-pole')
    return None


@witness_rule('exp-denominator')
def _denominator_witness(node: ex.Expr) -> Optional[SingularityWitness]:
    if not isinstance(node, ex.Div):
        return None
    base = accumulating_denominator(node)
    if base is None:
        return None
    location = f'zeros of {base}'
    return SingularityWitness(location, 'pole-accumulation', 'exp-denominator')


def _has_pole(u: ex.Expr) -> bool:
    if not ex.has_var(u) or not is_rational_tree(u):
        return False
    _, den = sympy.fraction(sympy.cancel(sympy.together(field_sympy(u))))
    return X in den.free_symbols


# Logarithmic derivatives.
def _merge(
    left: dict[sympy.Expr, Fraction],
    right: dict[sympy.Expr, Fraction],
    sign: int = 1
) -> dict[sympy.Expr, Fraction]:
    merged = dict(left)
    for base, c in right.items():
        merged[base] = merged.get(base, Fraction(0)) + sign * c
    return {base: c for base, c in merged.items() if c}


def _rational_factors(value: sympy.Expr) -> dict[sympy.Expr, Fraction]:
    """The monic irreducible factors of a rational function with
    their multiplicities, negative for the denominator.
    """
    if value == 0:
        msg = 'The function is identically zero.'
        raise NotInClass(msg)
    num, den = sympy.fraction(value)
    factors: dict[sympy.Expr, Fraction] = {}
    for part, sign in ((num, 1), (den, -1)):
        _, items = sympy.factor_list(part, X)
        for base, mult in items:
            if X not in base.free_symbols:
                continue
            monic = Poly(base, X).monic().as_expr()
            factors[monic] = factors.get(monic, Fraction(0)) + sign * mult
    return {base: c for base, c in factors.items() if c}


def _decompose(
    e: ex.Expr
) -> tuple[sympy.Expr, dict[sympy.Expr, Fraction]]:
    if not ex.has_var(e):
        if isinstance(e, ex.Num) and not e.value:
            msg = 'The function is identically zero.'
            raise NotInClass(msg)
        return sympy.Integer(0), {}
    if is_rational_tree(e):
        value = sympy.cancel(sympy.together(field_sympy(e)))
        return sympy.Integer(0), _rational_factors(value)
    if isinstance(e, (ex.Mul, ex.Div)):
        sign = 1 if isinstance(e, ex.Mul) else -1
        r_left, f_left = _decompose(e.left)
        r_right, f_right = _decompose(e.right)
        return r_left + sign * r_right, _merge(f_left, f_right, sign)
    if isinstance(e, ex.Neg):
        return _decompose(e.arg)
    if isinstance(e, ex.Pow):
        r, factors = _decompose(e.base)
        c = e.exponent
        return r * to_rational(c), {b: v * c for b, v in factors.items()}
    if isinstance(e, ex.Exp) and is_rational_tree(e.arg):
        return field_sympy(e.arg), {}
    msg = f'{ex.show(e)} is not exp(r) times powers of rational functions.'
    raise NotInClass(msg)


def log_derivative_decompose(
    e: ex.Expr,
    cfield: ConstField = QQ_FIELD
) -> Decomposition:
    """Write f = C * exp(r) * prod(g_i ** c_i) with r rational, g_i
    monic irreducible and c_i rational.

    The decomposition is checked through the logarithmic derivative
    f'/f = r' + sum(c_i * g_i'/g_i).

    :param e: The expression.
    :param cfield: The declared constants.
    :return: The decomposition, factors sorted by their printed base.
    :rtype: holoscope.model.Decomposition

    Usage:

        >>> from holoscope.parser import parse
        >>> d = log_derivative_decompose(parse('exp(1/x)*(x-1)^3'))
        >>> str(d.r), [(str(f.base), f.exponent) for f in d.factors]
        ('1/x', [('x - 1', Fraction(3, 1))])
    """
    field = expr_field(e, cfield)
    r, factors = _decompose(e)

    value = field_sympy(e)
    lhs = sympy.diff(value, X) / value
    rhs = sympy.diff(r, X) + sum(
        (to_rational(c) * sympy.diff(b, X) / b for b, c in factors.items()),
        sympy.Integer(0)
    )
    difference = sympy.together(lhs - rhs)
    if sympy.cancel(difference) != 0 and sympy.simplify(difference) != 0:
        msg = f'The decomposition of {ex.show(e)} does not check out.'
        raise NotInClass(msg)

    items = [
        Factor(RatFun.from_expr(b, X, field), c)
        for b, c in factors.items()
    ]
    items.sort(key=lambda f: str(f.base))
    return Decomposition(RatFun.from_expr(r, X, field), tuple(items))


def shift_quotient_rational(decomp: Decomposition, k: int = 1) -> ShiftQuotient:
    """Decide whether f(x+k)/f(x) is a rational function for
    f = exp(r) * prod(g_i ** c_i).

    It is exactly when r(x+k) - r(x) is constant and every base keeps
    an integer net exponent once the shifted factors are collected.

    :param decomp: The decomposition of f.
    :param k: The shift, at least one.
    :return: The answer, with the quotient or the failed condition.
    :rtype: holoscope.model.ShiftQuotient

    Usage:

        >>> r = RatFun.from_expr(X ** 2)
        >>> shift_quotient_rational(Decomposition(r, ()), 1).reason
        'r(x+1) - r(x) = 2*x + 1 is not constant'
    """
    if k < 1:
        msg = f'The shift must be at least one, not {k}.'
        raise ValueError(msg)
    delta = decomp.r.shift(k) - decomp.r
    if not delta.is_constant:
        reason = f'r(x+{k}) - r(x) = {delta} is not constant'
        return ShiftQuotient(False, k, reason=reason)

    net: dict[RatFun, Fraction] = {}
    for factor in decomp.factors:
        shifted = factor.base.shift(k)
        net[shifted] = net.get(shifted, Fraction(0)) + factor.exponent
        net[factor.base] = net.get(factor.base, Fraction(0)) - factor.exponent

    quotient = RatFun(Poly(1, X, domain=decomp.r.domain))
    for base in sorted(net, key=str):
        c = net[base]
        if c.denominator != 1:
            reason = f'net exponent {format_fraction(c)} of {base} is not an integer'
            return ShiftQuotient(False, k, reason=reason)
        if c:
            quotient = quotient * base ** int(c)
    return ShiftQuotient(True, k, quotient, delta)


# Polynomials in shifted logarithms.
def lex_key(vector: tuple[int, ...]) -> tuple[int, ...]:
    """Order exponent vectors with log(x+d) most significant."""
    return tuple(reversed(vector))


def _ratfun(value: Union[int, Fraction, RatFun]) -> RatFun:
    if isinstance(value, RatFun):
        return value
    return RatFun.const(Fraction(value), X)


class LogPoly:
    """A polynomial in log(x), log(x+1), ..., log(x+d) with rational
    function coefficients over the rationals, plus a rational
    combination of logarithms of primes.

    :param width: The number of logarithms, d + 1.
    :param terms: A map from exponent vectors to coefficients. The
        i-th exponent is the power of log(x+i).
    :param offset: A map from primes p to the coefficient of log(p).
    """
    __slots__ = ('width', 'terms', 'offset')

    def __init__(
        self,
        width: int,
        terms: Optional[dict[tuple[int, ...], RatFun]] = None,
        offset: Optional[dict[int, Fraction]] = None
    ) -> None:
        self.width = width
        self.terms = {v: c for v, c in (terms or {}).items() if c}
        self.offset = {p: c for p, c in (offset or {}).items() if c}

    def __repr__(self) -> str:
        return f'LogPoly({self})'

    def __str__(self) -> str:
        return str(self.as_sympy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogPoly):
            return NotImplemented
        return (
            self.width == other.width
            and self.terms == other.terms
            and self.offset == other.offset
        )

    # Constructors.
    @classmethod
    def constant(cls, width: int, value: Union[int, Fraction, RatFun]) -> 'LogPoly':
        return cls(width, {(0,) * width: _ratfun(value)})

    @classmethod
    def log(cls, width: int, shift: int) -> 'LogPoly':
        """The polynomial log(x + shift)."""
        vector = tuple(int(i == shift) for i in range(width))
        return cls(width, {vector: _ratfun(1)})

    @classmethod
    def log_constant(cls, width: int, q: Fraction) -> 'LogPoly':
        """The constant log(q) for a positive rational q."""
        exponents = prime_exponents(Fraction(q))
        offset = {p: Fraction(c) for p, c in exponents.items()}
        return cls(width, offset=offset)

    # Properties.
    @property
    def zero_vector(self) -> tuple[int, ...]:
        return (0,) * self.width

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.offset

    @property
    def has_logs(self) -> bool:
        return any(any(v) for v in self.terms)

    def leading(self) -> tuple[tuple[int, ...], RatFun]:
        """The lexicographically largest exponent vector and its
        coefficient.
        """
        if not self.terms:
            msg = 'The log-polynomial has no terms.'
            raise ValueError(msg)
        vector = max(self.terms, key=lex_key)
        return vector, self.terms[vector]

    def log_degree(self) -> tuple[int, ...]:
        if not self.terms:
            return self.zero_vector
        return lex_key(self.leading()[0])

    def rational_part(self) -> RatFun:
        return self.terms.get(self.zero_vector, _ratfun(0))

    def constant_value(self) -> Optional[Fraction]:
        """The value when this is a rational constant."""
        if self.offset or self.has_logs:
            return None
        part = self.rational_part()
        if not part.is_constant:
            return None
        return to_fraction(part.constant_value())

    # Arithmetic.
    def _coerce(self, other: object) -> 'LogPoly':
        if isinstance(other, LogPoly):
            if other.width != self.width:
                msg = 'Log-polynomials of different widths.'
                raise ValueError(msg)
            return other
        return LogPoly.constant(self.width, other)

    def __add__(self, other: object) -> 'LogPoly':
        other = self._coerce(other)
        terms = dict(self.terms)
        for v, c in other.terms.items():
            terms[v] = terms[v] + c if v in terms else c
        offset = dict(self.offset)
        for p, c in other.offset.items():
            offset[p] = offset.get(p, Fraction(0)) + c
        return LogPoly(self.width, terms, offset)

    __radd__ = __add__

    def __neg__(self) -> 'LogPoly':
        terms = {v: -c for v, c in self.terms.items()}
        offset = {p: -c for p, c in self.offset.items()}
        return LogPoly(self.width, terms, offset)

    def __sub__(self, other: object) -> 'LogPoly':
        return self + -self._coerce(other)

    def __mul__(self, other: object) -> 'LogPoly':
        other = self._coerce(other)
        terms: dict[tuple[int, ...], RatFun] = {}
        for v, c in self.terms.items():
            for w, d in other.terms.items():
                key = tuple(a + b for a, b in zip(v, w))
                terms[key] = terms[key] + c * d if key in terms else c * d
        offset: dict[int, Fraction] = {}
        for a, b in ((self, other), (other, self)):
            if not a.offset:
                continue
            scale = b.constant_value()
            if scale is None:
                msg = 'A logarithm of a constant times a nonconstant.'
                raise NotInRing(msg)
            for p, c in a.offset.items():
                offset[p] = offset.get(p, Fraction(0)) + c * scale
        return LogPoly(self.width, terms, offset)

    __rmul__ = __mul__

    def divide(self, c: RatFun) -> 'LogPoly':
        """Divide every coefficient by a rational function."""
        if c.is_zero:
            msg = 'Division of a log-polynomial by zero.'
            raise ZeroDivisionError(msg)
        terms = {v: d / c for v, d in self.terms.items()}
        offset = {}
        if self.offset:
            if not c.is_constant:
                msg = 'A logarithm of a constant over a nonconstant.'
                raise NotInRing(msg)
            value = to_fraction(c.constant_value())
            offset = {p: d / value for p, d in self.offset.items()}
        return LogPoly(self.width, terms, offset)

    def diff(self) -> 'LogPoly':
        """The derivative in x. Logarithms of constants drop out."""
        terms: dict[tuple[int, ...], RatFun] = {}

        def put(vector: tuple[int, ...], value: RatFun) -> None:
            terms[vector] = terms[vector] + value if vector in terms else value

        for v, c in self.terms.items():
            put(v, c.diff())
            for i, k in enumerate(v):
                if not k:
                    continue
                lowered = v[:i] + (k - 1,) + v[i + 1:]
                put(lowered, c * k / RatFun.from_expr(X + i))
        return LogPoly(self.width, terms)

    # Evaluation.
    def as_sympy(self) -> sympy.Expr:
        total = sympy.Integer(0)
        for v, c in self.terms.items():
            term = c.as_expr()
            for i, k in enumerate(v):
                term *= sympy.log(X + i) ** k
            total += term
        for p, c in self.offset.items():
            total += to_rational(c) * sympy.log(p)
        return total

    def eval_ball(self, x: Union[int, Fraction], prec: int = 64) -> Ball:
        """Enclose the value at a rational point x > 0 in a ball."""
        x = Fraction(x)
        logs = [
            ball_apply('log', [Ball.exact(x + i, prec)], prec=prec)
            for i in range(self.width)
        ]
        total = Ball.exact(0, prec)
        for v, c in self.terms.items():
            term = c.eval_ball(x, prec, QQ_FIELD)
            for value, k in zip(logs, v):
                if k:
                    term = term * value ** k
            total = total + term
        for p, c in self.offset.items():
            value = ball_apply('log', [Ball.exact(p, prec)], prec=prec)
            total = total + value * c
        return total


def _log_of(arg: ex.Expr, width: int) -> LogPoly:
    """log(arg) for a rational arg that splits into linear factors
    x + i with 0 <= i < width and a positive constant.
    """
    if not ex.has_var(arg):
        if not isinstance(arg, ex.Num) or arg.value <= 0:
            msg = f'log({ex.show(arg)}) is not a log of a positive rational.'
            raise NotInRing(msg)
        return LogPoly.log_constant(width, arg.value)
    if not is_rational_tree(arg) or opaque_nodes(arg):
        msg = f'log({ex.show(arg)}) has a non-rational argument.'
        raise NotInRing(msg)

    value = sympy.cancel(sympy.together(ex.to_sympy(arg)))
    num, den = sympy.fraction(value)
    result = LogPoly(width)
    content = Fraction(1)
    for part, sign in ((num, 1), (den, -1)):
        scale, items = sympy.factor_list(part, X)
        content *= to_fraction(scale) ** sign
        for base, mult in items:
            poly = Poly(base, X)
            if poly.degree() != 1:
                msg = f'log({ex.show(arg)}) has the factor {base}.'
                raise NotInRing(msg)
            a, b = (to_fraction(c) for c in poly.all_coeffs())
            shift = b / a
            if shift.denominator != 1 or not 0 <= shift < width:
                msg = f'log({ex.show(arg)}) shifts beyond log(x+{width - 1}).'
                raise NotInRing(msg)
            content *= a ** (sign * mult)
            result = result + LogPoly.log(width, int(shift)) * (sign * mult)
    if content <= 0:
        msg = f'log({ex.show(arg)}) is a log of a negative function.'
        raise NotInRing(msg)
    if content != 1:
        result = result + LogPoly.log_constant(width, content)
    return result


def _logpoly(e: ex.Expr, width: int) -> LogPoly:
    if isinstance(e, ex.Num):
        return LogPoly.constant(width, e.value)
    if isinstance(e, ex.Var):
        return LogPoly.constant(width, RatFun.from_expr(X))
    if isinstance(e, ex.Log):
        return _log_of(e.arg, width)
    if isinstance(e, ex.Neg):
        return -_logpoly(e.arg, width)
    if isinstance(e, (ex.Add, ex.Sub, ex.Mul)):
        left = _logpoly(e.left, width)
        right = _logpoly(e.right, width)
        if isinstance(e, ex.Add):
            return left + right
        if isinstance(e, ex.Sub):
            return left - right
        return left * right
    if isinstance(e, ex.Div):
        den = _logpoly(e.right, width)
        if den.has_logs or den.offset:
            msg = f'{ex.show(e)} divides by a logarithm.'
            raise NotInRing(msg)
        return _logpoly(e.left, width).divide(den.rational_part())
    if isinstance(e, ex.Pow) and e.exponent.denominator == 1:
        base = _logpoly(e.base, width)
        k = int(e.exponent)
        if k < 0:
            if base.has_logs or base.offset:
                msg = f'{ex.show(e)} divides by a logarithm.'
                raise NotInRing(msg)
            return LogPoly.constant(width, base.rational_part() ** k)
        result = LogPoly.constant(width, 1)
        for _ in range(k):
            result = result * base
        return result
    msg = f'{ex.show(e)} is not a polynomial in shifted logarithms.'
    raise NotInRing(msg)


def to_logpoly(e: ex.Expr, max_shift: int = 0) -> LogPoly:
    """Write an expression as a polynomial in log(x), ...,
    log(x + max_shift) with rational function coefficients.

    :param e: The expression.
    :param max_shift: The largest shift d.
    :return: The log-polynomial.
    :rtype: holoscope.analysis.LogPoly

    Usage:

        >>> from holoscope.parser import parse
        >>> to_logpoly(parse('(x+1)*log(x)')).terms
        {(1,): RatFun(x + 1)}
    """
    if max_shift < 0:
        msg = f'The largest shift must be nonnegative, not {max_shift}.'
        raise ValueError(msg)
    return _logpoly(e, max_shift + 1)


# Radical expressions.
def algebraic_normalize(
    e: ex.Expr,
    cfield: ConstField = QQ_FIELD
) -> Union[RationalForm, ProperAlgebraic]:
    """Reduce a radical expression to a rational function, or find a
    fractional exponent that survives.

    Products of powers are reduced by collecting exponents; other
    shapes through the minimal polynomial over the rational
    functions.

    :param e: An expression built with rational operations and
        rational powers.
    :param cfield: The declared constants.
    :return: The rational function, or the surviving exponent.
    :rtype: holoscope.model.RationalForm | holoscope.model.ProperAlgebraic

    Usage:

        >>> from holoscope.parser import parse
        >>> algebraic_normalize(parse('(x^(1/2))^2'))
        RationalForm(value=RatFun(x))
    """
    if not is_radical_tree(e):
        msg = f'{ex.show(e)} is not a radical expression.'
        raise NotRadical(msg)
    field = expr_field(e, cfield)
    value = field_sympy(e)

    try:
        decomp = log_derivative_decompose(e, cfield)
    except NotInClass:
        decomp = None
    if decomp is not None:
        odd = [f for f in decomp.factors if f.exponent.denominator != 1]
        if odd:
            form = sympy.Mul(*(
                f.base.as_expr() ** to_rational(f.exponent)
                for f in decomp.factors
            ))
            return ProperAlgebraic(str(odd[0].base), odd[0].exponent, str(form))
        product = RatFun(Poly(1, X, domain=field.domain))
        for f in decomp.factors:
            product = product * f.base ** int(f.exponent)
        scale = sympy.cancel(sympy.powsimp(value / product.as_expr(), force=True))
        if X not in scale.free_symbols:
            try:
                return RationalForm(product * RatFun.from_expr(scale, X, field))
            except BasePolynomialError:
                pass

    y = sympy.Dummy('y')
    try:
        minimal = sympy.minimal_polynomial(value, y)
    except (NotAlgebraic, NotImplementedError, BasePolynomialError) as exc:
        msg = f'No minimal polynomial for {ex.show(e)}: {exc}'
        raise NotRadical(msg)
    poly = Poly(minimal, y)
    if poly.degree() == 1:
        a, b = poly.all_coeffs()
        return RationalForm(RatFun.from_expr(-b / a, X, field))
    powers = fractional_powers(e)
    if not powers:
        msg = f'{ex.show(e)} has no fractional power to blame.'
        raise NotRadical(msg)
    witness = powers[0]
    normal = str(minimal.subs(y, Symbol('y')))
    return ProperAlgebraic(ex.show(witness.base), witness.exponent, normal)


# Exponential polynomials.
Key = Union[Fraction, str]


def _exp_tree(e: ex.Expr) -> bool:
    if not ex.has_var(e) or isinstance(e, (ex.Var, ex.Exp)):
        return True
    if isinstance(e, ex.Pow) and e.exponent.denominator != 1:
        return False
    if isinstance(e, (ex.Neg, ex.Pow) + ex.Binary):
        return all(_exp_tree(child) for child in ex.children(e))
    return False


def exp_exponents(node: ex.Exp) -> Optional[dict[Key, Fraction]]:
    """Split exp(s*x + t) into base exponents: s = sum(q_b * log(b)),
    where b is a positive rational, `e`, or a declared constant.
    """
    s = sympy.expand(sympy.expand_log(ex.to_sympy(node.arg), force=True))
    if not s.is_polynomial(X) or sympy.degree(s, X) > 1:
        return None
    parts: dict[Key, Fraction] = {}
    for term in sympy.Add.make_args(sympy.expand(s.coeff(X, 1))):
        if term == 0:
            continue
        coeff, rest = term.as_coeff_Mul()
        if not coeff.is_Rational:
            return None
        if rest == 1:
            key: Key = 'e'
        elif isinstance(rest, sympy.log) and rest.args[0].is_Rational:
            if rest.args[0] <= 0:
                return None
            key = to_fraction(rest.args[0])
        elif isinstance(rest, sympy.log) and rest.args[0].is_Symbol:
            key = rest.args[0].name
        else:
            return None
        parts[key] = parts.get(key, Fraction(0)) + to_fraction(coeff)
    return {k: v for k, v in parts.items() if v}


def _exact_root(b: Fraction, degree: int) -> Optional[Fraction]:
    num, num_exact = sympy.integer_nthroot(b.numerator, degree)
    den, den_exact = sympy.integer_nthroot(b.denominator, degree)
    if num_exact and den_exact:
        return Fraction(int(num), int(den))
    return None


def _root_rule(
    rule: Callable[[int], Ball],
    degree: int
) -> Callable[[int], Ball]:
    def root(prec: int) -> Ball:
        return ball_apply('pow', [rule(prec)], Fraction(1, degree), prec)
    return root


def _rational_rule(b: Fraction) -> Callable[[int], Ball]:
    def rule(prec: int) -> Ball:
        return Ball.exact(b, prec)
    return rule


def exp_ring(e: ex.Expr, cfield: ConstField = QQ_FIELD) -> Optional[ExpRing]:
    """Rewrite an expression in x and exponentials of affine functions
    over generators y_i = base_i**x.

    Rational bases are checked for multiplicative independence. When
    they are dependent, they are rewritten over their primes, which
    always are independent. A base whose exponents have a common
    denominator L is replaced by its L-th root.

    :param e: The expression.
    :param cfield: The declared constants.
    :return: The rewritten expression, or None when the expression
        is not of this shape.
    :rtype: holoscope.model.ExpRing | None

    Usage:

        >>> from holoscope.parser import parse
        >>> ring = exp_ring(parse('2^x/(3^x+1)'))
        >>> ring.labels, ring.value
        (('2', '3'), y1/(y2 + 1))
    """
    nodes = [
        node for node in ex.walk(e)
        if isinstance(node, ex.Exp) and ex.has_var(node)
    ]
    if not nodes or not _exp_tree(e):
        return None
    exponents = {}
    for node in nodes:
        parts = exp_exponents(node)
        if parts is None:
            return None
        exponents[node] = parts

    keys = {k for parts in exponents.values() for k in parts}
    rational = sorted(k for k in keys if isinstance(k, Fraction))
    named = sorted(k for k in keys if isinstance(k, str))
    declared = {c.name for c in cfield.constants}
    for name in named:
        if name != 'e' and name not in declared:
            raise UndeclaredConstant(name)

    # Atoms the bases factor over.
    relation = None
    atoms: dict[Key, dict[Key, Fraction]] = {}
    if rational:
        found = mult_independence(rational)
        if isinstance(found, Relation):
            relation = found
            for b in rational:
                primes = prime_exponents(b)
                atoms[b] = {Fraction(p): Fraction(c) for p, c in primes.items()}
        else:
            atoms.update({b: {b: Fraction(1)} for b in rational})
    atoms.update({name: {name: Fraction(1)} for name in named})

    powers: dict[Key, list[Fraction]] = {}
    for parts in exponents.values():
        for key, q in parts.items():
            for atom, mult in atoms[key].items():
                powers.setdefault(atom, []).append(q * mult)
    ordered = sorted(a for a in powers if isinstance(a, Fraction))
    ordered += sorted(a for a in powers if isinstance(a, str))

    # Generators.
    extra: list[Constant] = []
    generators = []
    denominators = {}
    for i, atom in enumerate(ordered):
        degree = reduce(lcm, (q.denominator for q in powers[atom]), 1)
        denominators[atom] = degree
        symbol = Symbol(f'y{i + 1}')
        if isinstance(atom, Fraction):
            label = format_fraction(atom)
            root = _exact_root(atom, degree)
            if root is not None:
                generators.append(ExpGenerator(label, symbol, root))
                continue
            rule = _root_rule(_rational_rule(atom), degree)
        else:
            label = atom
            if atom == 'e':
                rule = e_ball
                extra.append(Constant('e', e_ball))
            else:
                rule = cfield.rule(atom)
            if degree == 1:
                base = Symbol(atom, positive=True)
                generators.append(ExpGenerator(label, symbol, base))
                continue
            if rule is not None:
                rule = _root_rule(rule, degree)
        label = f'{label}^(1/{degree})'
        constant = Constant(label, rule)
        extra.append(constant)
        generators.append(ExpGenerator(label, symbol, constant.symbol))

    # Node values.
    values = {}
    for node, parts in exponents.items():
        monomial = sympy.Integer(1)
        for key, q in parts.items():
            for atom, mult in atoms[key].items():
                i = ordered.index(atom)
                power = q * mult * denominators[atom]
                monomial *= generators[i].symbol ** int(power)
        intercept = ex.Exp(ex.substitute(node.arg, ex.num(0)))
        factor = sympy.simplify(ex.to_sympy(intercept))
        if not factor.is_Rational:
            factor = _opaque_symbol(intercept)
            extra.append(Constant(ex.show(intercept), ex.constant_rule(intercept, cfield)))
        values[node] = factor * monomial

    def hook(node: ex.Expr) -> Optional[sympy.Expr]:
        if node in values:
            return values[node]
        return _opaque_symbol(node)

    value = ex.to_sympy(e, X, symbolic=True, hook=hook)
    field = expr_field(e, cfield).join(ConstField(tuple(extra)))
    labels = tuple(format_fraction(b) for b in rational) + tuple(named)
    return ExpRing(value, tuple(generators), field, labels, relation)


__all__ = [
    'LogPoly', 'algebraic_normalize', 'class_of', 'exp_ring',
    'expr_field', 'field_sympy', 'known_pattern', 'log_derivative_decompose',
    'rational_form', 'shift_quotient_rational', 'singularity_witness',
    'to_logpoly',
]
