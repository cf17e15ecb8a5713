"""
prover
~~~~~~

Certificates: bounds on the zeros of log-polynomials on a ray, the
bounded search that either refutes every small recurrence for a
sequence or finds one, and the checks that rule out recurrences for
the odd zeta values.
"""
import logging
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Union

import mpmath
import sympy

from holoscope.analysis import LogPoly, lex_key
from holoscope.errors import (
    CoefficientZeroOnRay,
    DomainViolation,
    InsufficientTerms,
    OracleDomain,
    PrecisionExhausted,
    ZeroFunction
)
from holoscope.exactnum import Ball, to_ball, zeta_ball
from holoscope.init import effective_cap
from holoscope.model import (
    Annihilation,
    CellReport,
    EliminationStage,
    EliminationTrace,
    FalsifyResult,
    RefutationCertificate,
    RolleStep,
    ZeroBoundCertificate,
    ZetaOddCertificate
)
from holoscope.polyring import (
    X,
    RatFun,
    count_roots_on_ray,
    determinant,
    eval_poly,
    make_poly,
    solve_nullspace,
    to_rational
)
from holoscope.recurrence import (
    Recurrence,
    SeqOracle,
    annihilates,
    make_recurrence
)


log = logging.getLogger(__name__)


# Zero bounds.
def _excluded_points(current: LogPoly, divisor: RatFun, x0: Fraction) -> int:
    """Count the zeros of the divisor and the poles of the
    coefficients on [x0, oo).
    """
    polys = [divisor.num, divisor.den]
    polys += [c.den for c in current.terms.values()]
    product = reduce(lambda a, b: a.lcm(b), polys)
    if product.degree() < 1:
        return 0
    return count_roots_on_ray(product, x0)


def rolle_zero_bound(
    f: LogPoly,
    x0: Union[int, Fraction] = 1
) -> ZeroBoundCertificate:
    """Bound the distinct zeros of a log-polynomial on [x0, oo).

    Each step divides by the coefficient of the leading log monomial
    and differentiates, which lowers the log-degree. The points where
    the divisor vanishes or a coefficient has a pole cut the ray into
    pieces; on each piece a function has at most one zero more than
    its derivative. A logarithm of a constant is removed first by a
    plain differentiation when the leading coefficient is not constant.

    :param f: The log-polynomial.
    :param x0: The start of the ray, positive.
    :return: The certificate.
    :rtype: holoscope.model.ZeroBoundCertificate

    Usage:

        >>> rolle_zero_bound(LogPoly.log(1, 0)).bound
        1
    """
    x0 = Fraction(x0)
    if x0 <= 0:
        msg = f'The ray must start at a positive point, not {x0}.'
        raise ValueError(msg)
    if f.is_zero:
        msg = 'The log-polynomial is identically zero.'
        raise ZeroFunction(msg)

    chain = []
    current = f
    while current.has_logs or current.offset:
        if not current.terms:
            break
        vector, divisor = current.leading()
        if divisor.is_zero:
            msg = f'The leading coefficient of {current} is zero.'
            raise CoefficientZeroOnRay(msg)
        if current.offset and not divisor.is_constant:
            divisor = RatFun.const(1, X)
            following = current.diff()
        else:
            following = current.divide(divisor).diff()
            if current.has_logs:
                assert following.log_degree() < lex_key(vector)
        excluded = 2 * _excluded_points(current, divisor, x0)
        chain.append(RolleStep(vector, divisor, excluded))
        log.debug('Rolle step over %s excludes %d.', vector, excluded)
        current = following
        if current.is_zero:
            break

    base = 0
    if current.terms and not current.has_logs:
        terminal = current.rational_part()
        if not terminal.is_zero:
            base = count_roots_on_ray(terminal.num, x0)
    bound = base + len(chain) + sum(step.excluded for step in chain)
    return ZeroBoundCertificate(x0, tuple(chain), base, bound)


# Falsification.
Matrix = list[list[Union[Fraction, Ball]]]


def _columns(d: int, r: int) -> list[tuple[int, int]]:
    return [(k, j) for k in range(d + 1) for j in range(r + 1)]


def _matrix(
    seq: SeqOracle,
    rows: Sequence[int],
    columns: Sequence[tuple[int, int]],
    prec: int
) -> Matrix:
    """Rows n, columns (k, j), entries n**j * a(n+k)."""
    return [
        [seq(n + k, prec) * n ** j for k, j in columns]
        for n in rows
    ]


def _independent_rows(matrix: Matrix) -> list[int]:
    """The indices of a maximal set of independent exact rows, taken
    greedily in order.
    """
    basis: list[tuple[int, list[Fraction]]] = []
    chosen = []
    for i, row in enumerate(matrix):
        reduced = list(row)
        for pivot, vector in basis:
            if reduced[pivot]:
                factor = reduced[pivot] / vector[pivot]
                reduced = [a - factor * b for a, b in zip(reduced, vector)]
        pivot = next((c for c, v in enumerate(reduced) if v), None)
        if pivot is not None:
            basis.append((pivot, reduced))
            chosen.append(i)
    return chosen


def _pivot_rows(matrix: Sequence[Sequence[Ball]], size: int) -> list[int]:
    """Pick rows by elimination with partial pivoting on the ball
    centers.
    """
    values = [
        [mpmath.mpf(b.mid.numerator) / b.mid.denominator for b in row]
        for row in matrix
    ]
    remaining = list(range(len(values)))
    chosen = []
    for c in range(size):
        best = max(remaining, key=lambda i: abs(values[i][c]))
        if not values[best][c]:
            break
        remaining.remove(best)
        chosen.append(best)
        for i in remaining:
            factor = values[i][c] / values[best][c]
            values[i] = [a - factor * b for a, b in zip(values[i], values[best])]
    return chosen


def _scale_columns(matrix: Sequence[Sequence[Ball]]) -> tuple[list[list[Ball]], int]:
    """Scale each column by a power of two so its largest center is
    near one. Returns the matrix and the total exponent applied.
    """
    scaled = [list(row) for row in matrix]
    total = 0
    for c in range(len(scaled[0])):
        largest = max(abs(row[c].mid) for row in scaled)
        if not largest:
            continue
        exponent = largest.denominator.bit_length() - largest.numerator.bit_length()
        total += exponent
        for row in scaled:
            row[c] = row[c].scale2(exponent)
    return scaled, total


def ball_determinant(matrix: Sequence[Sequence[Ball]]) -> Optional[Ball]:
    """The determinant of a ball matrix by elimination with partial
    pivoting, or None when a pivot cannot be shown nonzero.
    """
    rows = [list(row) for row in matrix]
    size = len(rows)
    result = Ball.exact(1, rows[0][0].prec)
    for c in range(size):
        pivot = max(range(c, size), key=lambda i: abs(rows[i][c].mid))
        if not rows[pivot][c].excludes_zero():
            return None
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            result = -result
        lead = rows[c][c]
        result = result * lead
        for i in range(c + 1, size):
            factor = rows[i][c] / lead
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[c])]
    return result


def _window_fits(seq: SeqOracle, start: int, stop: int) -> bool:
    return start >= seq.first and (seq.last is None or stop <= seq.last)


def _exact_cell(
    seq: SeqOracle,
    d: int,
    r: int,
    start: int,
    holdout: int,
    prec: int
) -> tuple[str, Optional[RefutationCertificate], Optional[Recurrence], Optional[Annihilation]]:
    columns = _columns(d, r)
    size = len(columns)
    rows = list(range(start, start + 2 * size))
    matrix = _matrix(seq, rows, columns, prec)

    chosen = _independent_rows(matrix)
    if len(chosen) == size:
        square = [matrix[i] for i in chosen]
        value = determinant(square, Fraction(0), Fraction(1))
        cert = RefutationCertificate(
            d, r, start,
            tuple(rows[i] for i in chosen),
            tuple(columns),
            Ball.exact(value, prec),
            0
        )
        return 'refuted', cert, None, None

    basis = solve_nullspace(matrix, size, Fraction(0), Fraction(1))
    vector = basis[0]
    coeffs = [vector[k * (r + 1):(k + 1) * (r + 1)] for k in range(d + 1)]
    rec = make_recurrence(coeffs, start)
    stop = rows[-1] + d + holdout
    if seq.last is not None:
        stop = min(stop, seq.last - rec.order)
    validation = annihilates(rec, seq, start, stop)
    if validation.holds and stop > rows[-1]:
        return 'candidate', None, rec, validation
    return 'unvalidated', None, rec, validation


def _ball_cell(
    seq: SeqOracle,
    d: int,
    r: int,
    start: int,
    prec_start: int,
    prec_cap: int
) -> tuple[str, Optional[RefutationCertificate], int]:
    columns = _columns(d, r)
    size = len(columns)
    rows = list(range(start, start + 2 * size))
    prec = prec_start
    while prec <= prec_cap:
        try:
            matrix = [
                [to_ball(v, prec) for v in row]
                for row in _matrix(seq, rows, columns, prec)
            ]
        except PrecisionExhausted:
            break
        scaled, exponent = _scale_columns(matrix)
        for chosen in (list(range(size)), _pivot_rows(scaled, size)):
            if len(chosen) != size:
                continue
            try:
                value = ball_determinant([scaled[i] for i in sorted(chosen)])
            except DomainViolation:
                value = None
            if value is not None and value.excludes_zero():
                cert = RefutationCertificate(
                    d, r, start,
                    tuple(rows[i] for i in sorted(chosen)),
                    tuple(columns),
                    value.scale2(-exponent),
                    prec
                )
                return 'refuted', cert, prec
        log.debug('Cell (%d, %d, %d) undecided at %d bits.', d, r, start, prec)
        prec *= 2
    return 'inconclusive', None, prec // 2


def falsify(
    seq: SeqOracle,
    dmax: int = 3,
    rmax: int = 3,
    windows: Sequence[int] = (1, 64, 512),
    prec_start: int = 64,
    prec_cap: int = 16384,
    holdout: int = 50
) -> FalsifyResult:
    """Search for recurrences of order 1 through dmax and coefficient
    degree at most rmax.

    For each cell (d, r, window start n1) the matrix with rows n
    from n1 and columns (k, j) holds n**j * a(n+k). A square
    submatrix with a nonzero determinant shows that no nonzero
    recurrence with those bounds holds on the window. Exact sequences
    use exact rank; an exact nullspace vector is returned as a
    candidate once it holds on held-out terms. Ball sequences raise
    the precision until the determinant ball excludes zero or the cap
    is reached.

    :param seq: The sequence.
    :param dmax: The largest order.
    :param rmax: The largest coefficient degree.
    :param windows: The window starts.
    :param prec_start: The first precision tried, in bits.
    :param prec_cap: The precision never gone beyond.
    :param holdout: How many terms past the window validate a guess.
    :return: `candidate` with the first validated recurrence in
        (d, r, window) order; `refuted` when every (d, r) is refuted
        in some window; `inconclusive` otherwise.
    :rtype: holoscope.model.FalsifyResult
    """
    prec_cap = min(prec_cap, effective_cap(prec_cap))
    certificates = []
    cells = []
    refuted_pairs = set()
    examined = False
    undefined: Optional[OracleDomain] = None
    for d in range(1, dmax + 1):
        for r in range(rmax + 1):
            size = (d + 1) * (r + 1)
            for start in windows:
                stop = start + 2 * size - 1 + d
                if not _window_fits(seq, start, stop):
                    cells.append(CellReport(d, r, start, 'skipped'))
                    continue
                try:
                    if seq.exact:
                        outcome, cert, rec, validation = _exact_cell(
                            seq, d, r, start, holdout, prec_start
                        )
                        prec = 0
                    else:
                        outcome, cert, prec = _ball_cell(
                            seq, d, r, start, prec_start, prec_cap
                        )
                        rec = validation = None
                except OracleDomain as exc:
                    undefined = exc
                    cells.append(CellReport(d, r, start, 'undefined'))
                    continue
                examined = True
                log.debug('Cell (%d, %d, %d): %s.', d, r, start, outcome)
                cells.append(CellReport(d, r, start, outcome, prec))
                if cert is not None:
                    certificates.append(cert)
                    refuted_pairs.add((d, r))
                if outcome == 'candidate':
                    return FalsifyResult(
                        'candidate', tuple(certificates), rec, validation,
                        tuple(cells), dmax, rmax, tuple(windows)
                    )

    if not examined:
        if undefined is not None:
            raise undefined
        msg = 'No window fits the terms of the sequence.'
        raise InsufficientTerms(msg)
    pairs = {(d, r) for d in range(1, dmax + 1) for r in range(rmax + 1)}
    status = 'refuted' if refuted_pairs == pairs else 'inconclusive'
    return FalsifyResult(
        status, tuple(certificates), None, None,
        tuple(cells), dmax, rmax, tuple(windows)
    )


# Odd zeta values.
def vandermonde_certificate(d: int) -> ZetaOddCertificate:
    """The determinant of the matrix (l**(-2k)) for 1 <= l <= d+1 and
    0 <= k <= d, by elimination and by the product formula.

    Usage:

        >>> vandermonde_certificate(1).determinant
        Fraction(-3, 4)
    """
    if d < 0:
        msg = f'The size parameter must be nonnegative, not {d}.'
        raise ValueError(msg)
    points = [Fraction(1, ell ** 2) for ell in range(1, d + 2)]
    rows = [[x ** k for k in range(d + 1)] for x in points]
    value = determinant(rows, Fraction(0), Fraction(1))
    product = Fraction(1)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            product *= points[j] - points[i]
    return ZetaOddCertificate(d, value, value == product)


def elimination_trace(
    rec: Recurrence,
    lmax: Optional[int] = None,
    n_stop: int = 1000,
    prec: Optional[int] = None
) -> EliminationTrace:
    """Check a recurrence against the constraints any annihilator of
    zeta(2n+1) must meet: sum_k p_k(n) / l**(2k) = 0 for every l.

    :param rec: A recurrence over the rationals.
    :param lmax: The last stage, d+1 by default.
    :param n_stop: The last index searched for a witness. The search
        runs past it when fewer than deg + 1 indices would be left.
    :param prec: When given, also enclose the recurrence applied to
        the odd zeta values at the witness.
    :return: The stages up to the first that fails.
    :rtype: holoscope.model.EliminationTrace

    Usage:

        >>> trace = elimination_trace(make_recurrence([[1], [-1]], normal=False))
        >>> trace.failed_at, trace.value
        (2, Fraction(3, 4))
    """
    if not rec.cfield.is_rational:
        msg = 'Elimination traces need a recurrence over the rationals.'
        raise ValueError(msg)
    d = rec.order
    lmax = d + 1 if lmax is None else lmax
    if lmax < 1:
        msg = f'The last stage must be at least one, not {lmax}.'
        raise ValueError(msg)

    stages = []
    for ell in range(1, lmax + 1):
        constraint = make_poly(sum(
            (p.as_expr() * to_rational(Fraction(1, ell ** (2 * k)))
             for k, p in enumerate(rec.coeffs)),
            sympy.Integer(0)
        ))
        vanishes = constraint.is_zero
        stages.append(EliminationStage(ell, constraint, vanishes))
        if vanishes:
            continue

        # A nonzero constraint of degree k is nonzero at one of any k+1
        # consecutive integers.
        start = max(rec.valid_from, 1)
        stop = max(n_stop, start + constraint.degree())
        witness = next(
            n for n in range(start, stop + 1) if eval_poly(constraint, n)
        )
        value = eval_poly(constraint, witness)
        residual = None
        if prec is not None:
            residual = Ball.exact(0, prec)
            for k, p in enumerate(rec.coeffs):
                term = zeta_ball(2 * (witness + k) + 1, prec)
                residual = residual + term * eval_poly(p, witness)
        return EliminationTrace(
            tuple(stages), ell, witness, value, False, residual
        )

    return EliminationTrace(tuple(stages), None, None, None, lmax >= d + 1)


__all__ = [
    'ball_determinant', 'elimination_trace', 'falsify', 'rolle_zero_bound',
    'vandermonde_certificate',
]
