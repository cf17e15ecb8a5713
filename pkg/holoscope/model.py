"""
model
~~~~~

The data model for the holoscope package.
"""
from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Any, NamedTuple, Optional

if TYPE_CHECKING:
    from holoscope.exactnum import Ball
    from holoscope.polyring import RatFun
    from holoscope.recurrence import Recurrence


# Configuration.
class JobConfig(NamedTuple):
    """The settings for one run of the tool.

    :param prec_start: The working precision in bits to start from.
    :param prec_cap: The precision in bits never to go beyond.
    :param dmax: The largest recurrence order searched.
    :param rmax: The largest coefficient degree searched.
    :param windows: The first indices of the sampled windows.
    :param verify_len: How many terms a recurrence is checked on.
    :param holdout: How many terms past a window validate a guess.
    :param constants: Declared constants as (name, value text) pairs.
        The value text is empty for purely symbolic constants.
    :param format: Either `text` or `json`.
    :param timing: Whether reports include the elapsed time.
    """
    prec_start: int = 64
    prec_cap: int = 16384
    dmax: int = 3
    rmax: int = 3
    windows: tuple[int, ...] = (1, 64, 512)
    verify_len: int = 200
    holdout: int = 50
    constants: tuple[tuple[str, str], ...] = ()
    format: str = 'text'
    timing: bool = False


# polyring.
class Independent(NamedTuple):
    """The bases are multiplicatively independent."""
    bases: tuple[Fraction, ...]


class Relation(NamedTuple):
    """The bases satisfy prod(bases[i] ** exponents[i]) == 1."""
    bases: tuple[Fraction, ...]
    exponents: tuple[int, ...]


# recurrence.
class Annihilation(NamedTuple):
    """The outcome of checking a recurrence against a sequence.

    :param holds: Whether no residual was shown to be nonzero.
    :param exact: Whether every residual was computed exactly. When
        this is false, `holds` only means "not refuted".
    :param witness: The first index whose residual excludes zero.
    :param residual: The residual at the witness.
    :param start: The first index checked.
    :param stop: The last index checked.
    """
    holds: bool
    exact: bool
    witness: Optional[int] = None
    residual: Any = None
    start: int = 0
    stop: int = 0


# analysis.
class ClassTag(NamedTuple):
    """The expression class an expression was sorted into.

    :param kind: One of `Rational`, `LogArctan`, `ExpPoly`,
        `GammaProduct`, `PowerSelf`, `AlgebraicPower`, `ZetaArg`,
        `KnownNonHolonomic`, `Other`.
    :param params: Data for the class, such as the bases of an
        exponential polynomial or the id of a known sequence.
    """
    kind: str
    params: tuple = ()


class SingularityWitness(NamedTuple):
    """A point where the function has no meromorphic extension.

    :param location: The point, printed exactly or described.
    :param nature: One of `branch point`, `essential`,
        `pole-accumulation`, `non-meromorphic-at`.
    :param rule: The id of the table rule that produced it.
    """
    location: str
    nature: str
    rule: str


class Factor(NamedTuple):
    """A factor g(x)^c of a logarithmic-derivative decomposition,
    with g monic and irreducible over the rationals.
    """
    base: RatFun
    exponent: Fraction

    @property
    def alpha(self) -> Any:
        """The root of the base when it is linear, as an element of
        the constant field.
        """
        poly = self.base.num
        if poly.degree() != 1:
            return None
        return -poly.all_coeffs()[-1]


class Decomposition(NamedTuple):
    """f = exp(r) * prod(g_i ** c_i) up to a constant factor."""
    r: RatFun
    factors: tuple[Factor, ...]


class ShiftQuotient(NamedTuple):
    """Whether f(x+k)/f(x) is a rational function.

    :param rational: The answer.
    :param quotient: The rational part prod(g_i ** net_i) when the
        answer is yes.
    :param exp_shift: The constant r(x+k) - r(x) when the answer is
        yes, so the quotient is exp(exp_shift) * quotient.
    :param reason: Which condition failed when the answer is no.
    """
    rational: bool
    k: int
    quotient: Optional[RatFun] = None
    exp_shift: Optional[RatFun] = None
    reason: str = ''


class RationalForm(NamedTuple):
    """A radical expression that reduces to a rational function."""
    value: RatFun


class ProperAlgebraic(NamedTuple):
    """A radical expression with a surviving fractional exponent.

    :param base: The base carrying the fractional exponent.
    :param exponent: The fractional exponent.
    :param normal_form: The reduced expression, printed.
    """
    base: Any
    exponent: Fraction
    normal_form: str


class ExpGenerator(NamedTuple):
    """A generator y = base**x of an exponential polynomial ring.

    :param label: The base as printed, such as `2`, `e` or `2^(1/2)`.
    :param symbol: The sympy symbol standing for y.
    :param base: The value of y at x = 1: a rational, or a symbol of
        the ring's constant field.
    """
    label: str
    symbol: Any
    base: Any


class ExpRing(NamedTuple):
    """An expression rewritten over the generators y_i = base_i**x.

    :param value: The expression as a sympy expression in x and the
        generator symbols.
    :param generators: The generators.
    :param cfield: The constant field of the coefficients.
    :param labels: The bases as they appear in the expression.
    :param relation: The multiplicative relation among the rational
        bases, when one was found and the bases were rewritten over
        primes.
    """
    value: Any
    generators: tuple[ExpGenerator, ...]
    cfield: Any
    labels: tuple[str, ...]
    relation: Optional[Relation] = None


# classifier.
class Member(NamedTuple):
    """The function lies in the Laurent ring over the bases.

    :param terms: Pairs of y-exponent vectors and their rational
        function coefficients.
    """
    terms: tuple[tuple[tuple[int, ...], Any], ...]


class NonMember(NamedTuple):
    """The function's denominator has a factor that blocks
    membership.
    """
    witness: Any


# prover.
class RolleStep(NamedTuple):
    """One division-then-differentiation step of a Rolle chain.

    :param exponent: The leading exponent vector divided out.
    :param divisor: The coefficient that was divided by.
    :param excluded: The zero count charged for the points where the
        divisor vanishes or the coefficients have poles.
    """
    exponent: tuple[int, ...]
    divisor: RatFun
    excluded: int


class ZeroBoundCertificate(NamedTuple):
    """A bound on the distinct zeros of a log-polynomial on a ray."""
    x0: Fraction
    chain: tuple[RolleStep, ...]
    base: int
    bound: int


class RefutationCertificate(NamedTuple):
    """No recurrence within (order, degree) annihilates a window.

    :param order: The largest order excluded.
    :param degree: The largest coefficient degree excluded.
    :param start: The first index of the window.
    :param rows: The indices of the matrix rows.
    :param columns: The (shift, power) pairs of the matrix columns.
    :param determinant: A ball enclosing the determinant; it
        excludes zero.
    :param precision: The precision in bits the ball was built at,
        zero for exact determinants.
    """
    order: int
    degree: int
    start: int
    rows: tuple[int, ...]
    columns: tuple[tuple[int, int], ...]
    determinant: Ball
    precision: int


class CellReport(NamedTuple):
    """What the falsifier found for one (order, degree, window)."""
    order: int
    degree: int
    start: int
    outcome: str
    precision: int = 0


class FalsifyResult(NamedTuple):
    """The outcome of a bounded recurrence search.

    :param status: One of `refuted`, `candidate`, `inconclusive`.
    :param certificates: Certificates for refuted cells.
    :param recurrence: The candidate recurrence, if any.
    :param validation: How the candidate fared on held-out terms.
    :param cells: One report per cell examined.
    :param dmax: The order bound searched.
    :param rmax: The degree bound searched.
    :param windows: The window starts searched.
    """
    status: str
    certificates: tuple[RefutationCertificate, ...] = ()
    recurrence: Optional[Recurrence] = None
    validation: Optional[Annihilation] = None
    cells: tuple[CellReport, ...] = ()
    dmax: int = 0
    rmax: int = 0
    windows: tuple[int, ...] = ()


class ZetaOddCertificate(NamedTuple):
    """The inverse-square Vandermonde matrix of size d+1 is
    invertible.

    :param d: The largest recurrence order covered.
    :param determinant: The determinant by elimination.
    :param product_matches: Whether it equals the product formula.
    :param step: The stride of the subsequence n = step*m + offset
        that runs over the odd zeta values.
    :param offset: The first index of that subsequence.
    """
    d: int
    determinant: Fraction
    product_matches: bool
    step: int = 1
    offset: int = 0


class EliminationStage(NamedTuple):
    """The constraint sum_k p_k(n) / l^(2k) at one stage."""
    ell: int
    constraint: Any
    vanishes: bool


class EliminationTrace(NamedTuple):
    """How a candidate annihilator of the odd zeta values fails.

    :param stages: Every stage that was computed.
    :param failed_at: The first stage with a nonzero constraint.
    :param witness: An index where that constraint is nonzero.
    :param value: The constraint's value at the witness.
    :param zero_operator: True when every stage up to d+1 vanished,
        which only the zero operator can do.
    :param residual: A ball for the recurrence applied to the odd
        zeta values at the witness, when a precision was given.
    """
    stages: tuple[EliminationStage, ...]
    failed_at: Optional[int]
    witness: Optional[int]
    value: Optional[Fraction]
    zero_operator: bool
    residual: Optional[Ball] = None


class Evidence(NamedTuple):
    """Machine evidence attached to a verdict."""
    witness: Optional[SingularityWitness] = None
    refutations: tuple[RefutationCertificate, ...] = ()
    zeta_odd: Optional[ZetaOddCertificate] = None
    zero_bound: Optional[ZeroBoundCertificate] = None
    shift_quotient: Optional[ShiftQuotient] = None
    membership: Optional[NonMember] = None
    relation: Optional[Relation] = None

    def count(self) -> int:
        """How many evidence items are present."""
        items = [
            self.witness,
            self.zeta_odd,
            self.zero_bound,
            self.shift_quotient,
            self.membership,
        ]
        return sum(item is not None for item in items) + len(self.refutations)


class Verdict(NamedTuple):
    """The classification of a sequence.

    :param status: One of `Holonomic`, `NonHolonomic`, `Unknown`.
    :param tag: The expression class that drove the decision.
    :param recurrence: The recurrence of a holonomic verdict.
    :param verification: The check of that recurrence.
    :param citation: The rule id of a non-holonomic verdict.
    :param evidence: The evidence bundle.
    :param report: The falsifier report of an unknown verdict.
    """
    status: str
    tag: ClassTag
    recurrence: Optional[Recurrence] = None
    verification: Optional[Annihilation] = None
    citation: str = ''
    evidence: Evidence = Evidence()
    report: Optional[FalsifyResult] = None
