"""
classifier
~~~~~~~~~~

Turns expression classes into verdicts. Holonomic verdicts carry a
recurrence that was checked against the sequence; non-holonomic
verdicts cite one entry of a fixed table and carry machine evidence;
anything else is reported as unknown with the falsifier's findings.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Optional, Union

import sympy
from sympy import Poly

from holoscope import expr as ex
from holoscope.analysis import (
    class_of,
    exp_ring,
    expr_field,
    log_derivative_decompose,
    rational_form,
    singularity_witness,
    strip_constant,
    to_logpoly,
    trig_slope
)
from holoscope.errors import (
    DependentBases,
    NotAnnihilated,
    NotInRing,
    ZeroFunction
)
from holoscope.model import (
    ClassTag,
    Evidence,
    ExpRing,
    FalsifyResult,
    JobConfig,
    Member,
    NonMember,
    Relation,
    ShiftQuotient,
    Verdict
)
from holoscope.parser import make_cfield
from holoscope.polyring import (
    N,
    QQ_FIELD,
    X,
    Constant,
    ConstField,
    RatFun,
    make_poly,
    mult_independence,
    to_rational
)
from holoscope.prover import falsify, rolle_zero_bound, vandermonde_certificate
from holoscope.recurrence import (
    Recurrence,
    annihilates,
    closure_sum,
    gamma_product_recurrence,
    hypergeom_from_ratfun,
    make_recurrence
)
from holoscope.utility import format_fraction


log = logging.getLogger(__name__)


# Citations.
CITATIONS = {
    'log-arctan-field': (
        'f(n) for f built from x, logarithms and arctangents is holonomic '
        'only when f is a rational function.'
    ),
    'growth-singularity': (
        'f(n) is not holonomic when f is analytic and of slow growth on a '
        'right half plane but has a singularity that no solution of a '
        'linear difference equation can have.'
    ),
    'gamma-product': (
        'prod(Gamma(n - u_i) ** alpha_i) is holonomic only when every '
        'alpha_i is an integer.'
    ),
    'power-self': 'n ** (alpha * n) is not holonomic for alpha != 0.',
    'exp-polynomial-ring': (
        'f(n) for f rational in x and independent exponentials base**x is '
        'holonomic only when f is a Laurent polynomial in the exponentials.'
    ),
    'algebraic-function': (
        'f(n) for an algebraic function f is holonomic only when f is '
        'rational.'
    ),
    'odd-zeta': (
        'zeta(2n+1) is not holonomic, so neither is a sequence with a '
        'subsequence that shifts it.'
    ),
    'pole-meromorphic-infinity': (
        'f(n) is not holonomic when f is meromorphic but its poles or '
        'essential singularities accumulate.'
    ),
}
KNOWN_CITATIONS = {
    'exp-inverse': 'growth-singularity',
    'exp-exp-inverse': 'growth-singularity',
    'exp-radical': 'growth-singularity',
    'trig-inverse': 'pole-meromorphic-infinity',
    'exp-pole-accumulation': 'pole-meromorphic-infinity',
}


# Jobs.
@dataclass(frozen=True)
class Job:
    """One classification: the expression, its constants and the
    settings.
    """
    expr: ex.Expr
    cfield: ConstField
    config: JobConfig

    @property
    def oracle(self) -> ex.ExprOracle:
        return ex.ExprOracle(self.expr, self.cfield)

    def falsify(self) -> FalsifyResult:
        c = self.config
        return falsify(
            self.oracle, c.dmax, c.rmax, c.windows,
            c.prec_start, c.prec_cap, c.holdout
        )


VerdictRule = Callable[[Job, ClassTag], Verdict]
verdict_rules: dict[str, VerdictRule] = {}


class verdict_rule:
    """A decorator that registers the verdict rule for a class."""
    def __init__(self, kind: str) -> None:
        self.kind = kind

    def __call__(self, fn: VerdictRule) -> VerdictRule:
        verdict_rules[self.kind] = fn
        return fn


def classify(
    e: ex.Expr,
    config: JobConfig = JobConfig(),
    cfield: Optional[ConstField] = None
) -> Verdict:
    """Decide whether the sequence f(n) of a closed form is holonomic.

    :param e: The expression for f.
    :param config: The settings.
    :param cfield: The declared constants. They are built from the
        settings when not given.
    :return: The verdict.
    :rtype: holoscope.model.Verdict

    Usage:

        >>> from holoscope.parser import parse
        >>> classify(parse('(x^2+1)/(x+3)')).status
        'Holonomic'
    """
    if cfield is None:
        cfield = make_cfield(config.constants)
    tag = class_of(e, cfield)
    log.debug('%s is in class %s.', ex.show(e), tag.kind)
    job = Job(e, expr_field(e, cfield), config)
    return verdict_rules[tag.kind](job, tag)


# Verdict helpers.
def holonomic(job: Job, tag: ClassTag, rec: Recurrence) -> Verdict:
    """Check the recurrence on the sequence and wrap it in a verdict."""
    c = job.config
    start = rec.valid_from
    check = annihilates(rec, job.oracle, start, start + c.verify_len, c.prec_start)
    if not check.holds:
        raise NotAnnihilated(check.witness)
    return Verdict('Holonomic', tag, rec, check)


def non_holonomic(
    job: Job,
    tag: ClassTag,
    citation: str,
    evidence: Evidence = Evidence()
) -> Verdict:
    """Wrap a citation and its evidence in a verdict. The falsifier
    supplies evidence when nothing else does.
    """
    if citation not in CITATIONS:
        msg = f'Unknown citation {citation!r}.'
        raise ValueError(msg)
    if not evidence.count():
        report = job.falsify()
        evidence = evidence._replace(refutations=report.certificates)
        if report.status == 'candidate' or not evidence.count():
            return Verdict('Unknown', tag, report=report)
    return Verdict('NonHolonomic', tag, citation=citation, evidence=evidence)


def unknown(job: Job, tag: ClassTag) -> Verdict:
    return Verdict('Unknown', tag, report=job.falsify())


def _hypergeometric(coeff: RatFun, q: sympy.Expr, cfield: ConstField) -> Recurrence:
    """The recurrence of coeff(n) * q**n."""
    rec = hypergeom_from_ratfun(coeff, cfield)
    p0 = make_poly(rec.coeffs[0].as_expr() * q, N, cfield)
    return make_recurrence([p0, rec.coeffs[1]], rec.valid_from, cfield)


# Rules.
@verdict_rule('Rational')
def _rational(job: Job, tag: ClassTag) -> Verdict:
    f = rational_form(job.expr, job.cfield)
    if f.is_zero:
        rec = make_recurrence([[1]], 1, job.cfield)
    else:
        rec = hypergeom_from_ratfun(f, job.cfield)
    return holonomic(job, tag, rec)


@verdict_rule('LogArctan')
def _log_arctan(job: Job, tag: ClassTag) -> Verdict:
    report = job.falsify()
    if report.status == 'candidate':
        log.debug('The falsifier found %s.', report.recurrence)
        return Verdict('Unknown', tag, report=report)
    bound = None
    if tag.params == ('log',):
        difference = ex.sub(ex.shift(job.expr, 1), job.expr)
        try:
            bound = rolle_zero_bound(to_logpoly(difference, 2))
        except (NotInRing, ZeroFunction):
            bound = None
    evidence = Evidence(
        witness=singularity_witness(job.expr),
        refutations=report.certificates,
        zero_bound=bound
    )
    return non_holonomic(job, tag, 'log-arctan-field', evidence)


@verdict_rule('ExpPoly')
def _exp_poly(job: Job, tag: ClassTag) -> Verdict:
    if tag.params and tag.params[0] == 'conjugate-pair':
        return holonomic(job, tag, trig_recurrence(job.expr, job.cfield))

    ring = exp_ring(job.expr, job.cfield)
    found = exp_poly_membership(ring)
    if isinstance(found, NonMember):
        evidence = Evidence(
            witness=singularity_witness(job.expr),
            membership=found,
            relation=ring.relation
        )
        return non_holonomic(job, tag, 'exp-polynomial-ring', evidence)
    return holonomic(job, tag, member_recurrence(found, ring))


@verdict_rule('GammaProduct')
def _gamma_product(job: Job, tag: ClassTag) -> Verdict:
    us, alphas = tag.params
    odd = [(u, a) for u, a in zip(us, alphas) if a.denominator != 1]
    if not odd:
        rec = gamma_product_recurrence(us, [int(a) for a in alphas])
        return holonomic(job, tag, rec)
    evidence = Evidence(
        witness=singularity_witness(job.expr),
        shift_quotient=gamma_shift_quotient(us, alphas, job.cfield)
    )
    return non_holonomic(job, tag, 'gamma-product', evidence)


def gamma_shift_quotient(
    us: tuple[Fraction, ...],
    alphas: tuple[Fraction, ...],
    cfield: ConstField = QQ_FIELD
) -> ShiftQuotient:
    """Decide whether f(x+1)/f(x) is rational for
    f = prod(gamma(x - u_i) ** alpha_i).

    The quotient is prod((x - u_i) ** alpha_i). It is decomposed, and
    it is rational exactly when every collected exponent is an integer.

    Usage:

        >>> from fractions import Fraction
        >>> sq = gamma_shift_quotient((Fraction(-1),), (Fraction(1, 2),))
        >>> sq.rational, sq.reason
        (False, 'net exponent 1/2 of x + 1 is not an integer')
    """
    quotient = ex.num(1)
    for u, alpha in zip(us, alphas):
        base = ex.sub(ex.Var(), ex.num(u))
        quotient = ex.mul(quotient, ex.power(base, alpha))
    decomp = log_derivative_decompose(quotient, cfield)
    rest = RatFun(Poly(1, X, domain=decomp.r.domain))
    for factor in decomp.factors:
        c = factor.exponent
        if c.denominator != 1:
            reason = (
                f'net exponent {format_fraction(c)} of {factor.base} '
                'is not an integer'
            )
            return ShiftQuotient(False, 1, reason=reason)
        rest = rest * factor.base ** int(c)
    return ShiftQuotient(True, 1, rest, decomp.r.shift(1) - decomp.r)


@verdict_rule('PowerSelf')
def _power_self(job: Job, tag: ClassTag) -> Verdict:
    evidence = Evidence(witness=singularity_witness(job.expr))
    return non_holonomic(job, tag, 'power-self', evidence)


@verdict_rule('AlgebraicPower')
def _algebraic(job: Job, tag: ClassTag) -> Verdict:
    evidence = Evidence(witness=singularity_witness(job.expr))
    return non_holonomic(job, tag, 'algebraic-function', evidence)


@verdict_rule('ZetaArg')
def _zeta(job: Job, tag: ClassTag) -> Verdict:
    a, b = tag.params
    if a == 2 and b % 2:
        certificate = vandermonde_certificate(job.config.dmax)
    elif a == 1:
        # Every other term of zeta(n + b) is a shift of zeta(2m + 1),
        # and subsequences of holonomic sequences are holonomic.
        offset = 1 if b % 2 == 0 else 2
        while offset + b < 3:
            offset += 2
        certificate = vandermonde_certificate(job.config.dmax)._replace(
            step=2, offset=offset
        )
    else:
        return unknown(job, tag)
    evidence = Evidence(zeta_odd=certificate)
    return non_holonomic(job, tag, 'odd-zeta', evidence)


@verdict_rule('KnownNonHolonomic')
def _known(job: Job, tag: ClassTag) -> Verdict:
    citation = KNOWN_CITATIONS[tag.params[0]]
    evidence = Evidence(witness=singularity_witness(job.expr))
    return non_holonomic(job, tag, citation, evidence)


@verdict_rule('Other')
def _other(job: Job, tag: ClassTag) -> Verdict:
    return unknown(job, tag)


# Trigonometric sequences.
def trig_recurrence(e: ex.Expr, cfield: ConstField) -> Recurrence:
    """a(n+2) - 2*cos(s)*a(n+1) + a(n) = 0 for c * sin(s*x + t) and
    c * cos(s*x + t).
    """
    slope = trig_slope(strip_constant(e))
    node = ex.Cos(slope)
    value = sympy.simplify(ex.to_sympy(node))
    if value.is_Rational:
        cosine, field = value, cfield
    else:
        constant = Constant(ex.show(node), ex.constant_rule(node, cfield))
        cosine = constant.symbol
        field = cfield.join(ConstField((constant,)))
    return make_recurrence([1, -2 * cosine, 1], 1, field)


# Exponential polynomials.
def exp_poly_membership(ring: ExpRing) -> Union[Member, NonMember]:
    """Decide whether f lies in the Laurent ring R(x)[y_i, 1/y_i].

    The units of the ring are the nonzero rational functions of x
    times monomials in the y_i, so f is a member exactly when every
    factor of its reduced denominator that involves some y_i is a
    single y_i.

    :param ring: The expression rewritten over the generators.
    :return: The Laurent terms, or the factor that blocks membership.
    :rtype: holoscope.model.Member | holoscope.model.NonMember

    Usage:

        >>> from holoscope.parser import parse
        >>> exp_poly_membership(exp_ring(parse('1/(2^x+1)')))
        NonMember(witness=y1 + 1)
    """
    bases = [g.base for g in ring.generators if isinstance(g.base, Fraction)]
    if len(bases) > 1:
        found = mult_independence(bases)
        if isinstance(found, Relation):
            raise DependentBases(found.exponents)

    ys = [g.symbol for g in ring.generators]
    value = sympy.cancel(sympy.together(ring.value))
    num, den = sympy.fraction(value)

    content, factors = sympy.factor_list(den)
    den_x = content
    shift = [0] * len(ys)
    for base, mult in factors:
        if not base.free_symbols & set(ys):
            den_x *= base ** mult
        elif base in ys:
            shift[ys.index(base)] += mult
        else:
            return NonMember(base)

    terms = []
    if num != 0:
        poly = Poly(sympy.expand(num), *ys)
        for monom, coeff in poly.terms():
            vector = tuple(m - s for m, s in zip(monom, shift))
            part = sympy.cancel(coeff / den_x)
            terms.append((vector, RatFun.from_expr(part, X, ring.cfield)))
    terms.sort(key=lambda term: term[0])
    return Member(tuple(terms))


def member_recurrence(member: Member, ring: ExpRing) -> Recurrence:
    """The recurrence of a Laurent exponential polynomial, summing the
    hypergeometric recurrences of its terms.
    """
    if not member.terms:
        return make_recurrence([[1]], 1, ring.cfield)
    recs = []
    for vector, coeff in member.terms:
        q = sympy.Integer(1)
        for g, power in zip(ring.generators, vector):
            base = to_rational(g.base) if isinstance(g.base, Fraction) else g.base
            q *= base ** power
        recs.append(_hypergeometric(coeff, q, ring.cfield))
    return reduce(lambda a, b: closure_sum([a, b]), recs)


__all__ = ['CITATIONS', 'classify', 'exp_poly_membership', 'trig_recurrence']
