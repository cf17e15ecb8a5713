"""
report
~~~~~~

Writing results as JSON documents and as plain text. Rationals are
written as `p/q` strings and balls as four integers, so documents
are exact and read back to equal values.
"""
import json
from fractions import Fraction
from functools import singledispatch
from typing import Any, Optional, Sequence

import sympy
from sympy import Poly

from holoscope.classifier import CITATIONS
from holoscope.exactnum import Ball
from holoscope.model import (
    Evidence,
    FalsifyResult,
    JobConfig,
    Verdict
)
from holoscope.polyring import RatFun
from holoscope.recurrence import Recurrence, format_poly
from holoscope.utility import format_fraction


# Types.
Report = dict[str, Any]


# Encoding values.
@singledispatch
def to_json(value: Any) -> Any:
    """Convert a value into JSON types."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, sympy.Basic):
        return str(value)
    msg = f'Cannot encode {type(value).__name__} as JSON.'
    raise TypeError(msg)


@to_json.register
def _(value: Fraction) -> str:
    return format_fraction(value)


@to_json.register
def _(value: Ball) -> dict[str, int]:
    center_m, center_e, radius_m, radius_e = value.parts()
    return {
        'center_mantissa': center_m,
        'center_exponent': center_e,
        'radius_mantissa': radius_m,
        'radius_exponent': radius_e,
    }


@to_json.register
def _(value: Poly) -> str:
    return format_poly(value)


@to_json.register
def _(value: RatFun) -> str:
    return str(value)


@to_json.register
def _(value: Recurrence) -> dict[str, Any]:
    return {
        'coeffs': [format_poly(p) for p in value.coeffs],
        'valid_from': value.valid_from,
        'field': str(value.cfield),
        'order': value.order,
        'degree': value.degree,
        'text': value.describe(),
    }


@to_json.register(list)
@to_json.register(tuple)
def _(value: Sequence) -> Any:
    if hasattr(value, '_asdict'):
        return {k: to_json(v) for k, v in value._asdict().items()}
    return [to_json(item) for item in value]


@to_json.register
def _(value: dict) -> dict[str, Any]:
    return {str(k): to_json(v) for k, v in value.items()}


# Records.
def config_json(config: JobConfig) -> dict[str, Any]:
    """The settings of a run."""
    values = to_json(config)
    values['constants'] = {name: text for name, text in config.constants}
    return values


def evidence_json(evidence: Evidence) -> list[dict[str, Any]]:
    """The evidence items, each tagged with its kind."""
    items = []
    for kind, value in evidence._asdict().items():
        if kind == 'refutations':
            items.extend(
                {'kind': 'refutation', **to_json(cert)} for cert in value
            )
        elif value is not None:
            items.append({'kind': kind, **to_json(value)})
    return items


def verdict_json(verdict: Verdict) -> dict[str, Any]:
    """The verdict without its evidence."""
    result = {
        'status': verdict.status,
        'class': {
            'kind': verdict.tag.kind,
            'params': to_json(verdict.tag.params),
        },
        'recurrence': to_json(verdict.recurrence),
        'verification': to_json(verdict.verification),
        'citation': verdict.citation or None,
        'citation_text': CITATIONS.get(verdict.citation),
        'falsifier': None,
    }
    if verdict.report is not None:
        result['falsifier'] = falsify_json(verdict.report)
    return result


def falsify_json(result: FalsifyResult) -> dict[str, Any]:
    values = to_json(result)
    del values['certificates']
    return values


def make_report(
    command: str,
    config: JobConfig,
    key: str,
    payload: Any,
    evidence: Sequence[dict[str, Any]] = (),
    timing_ms: Optional[int] = None
) -> Report:
    """Assemble a report document.

    :param command: The command run.
    :param config: The settings.
    :param key: `verdict` or `result`.
    :param payload: The verdict or result, already in JSON types.
    :param evidence: Evidence items.
    :param timing_ms: The elapsed time, when asked for.
    :return: The document.
    :rtype: dict
    """
    return {
        'command': command,
        'config': config_json(config),
        key: payload,
        'evidence': list(evidence),
        'timing_ms': timing_ms,
    }


def error_report(command: str, code: str, message: str) -> Report:
    return {'command': command, 'error': {'code': code, 'message': message}}


def dumps(report: Report) -> str:
    """Write a report as JSON text."""
    return json.dumps(report, indent=2)


# Text.
def verdict_lines(verdict: Verdict) -> list[str]:
    """Describe a verdict for people.

    Usage:

        >>> from holoscope.model import ClassTag
        >>> verdict_lines(Verdict('Unknown', ClassTag('Other')))
        ['Unknown (class Other)']
    """
    lines = [f'{verdict.status} (class {verdict.tag.kind})']
    if verdict.recurrence is not None:
        lines.append(f'recurrence: {verdict.recurrence.describe()}')
    if verdict.verification is not None:
        check = verdict.verification
        lines.append(f'verified on n = {check.start}..{check.stop}')
    if verdict.citation:
        lines.append(f'citation: {verdict.citation}: {CITATIONS[verdict.citation]}')
    lines.extend(evidence_lines(verdict.evidence))
    if verdict.report is not None:
        lines.extend(falsify_lines(verdict.report))
    return lines


def evidence_lines(evidence: Evidence) -> list[str]:
    lines = []
    if evidence.witness is not None:
        w = evidence.witness
        lines.append(f'witness: {w.nature} at {w.location} ({w.rule})')
    for cert in evidence.refutations:
        lines.append(
            f'refuted: order {cert.order}, degree {cert.degree}, '
            f'window {cert.start}, {cert.precision or "exact"} bits'
        )
    if evidence.zeta_odd is not None:
        z = evidence.zeta_odd
        lines.append(
            f'vandermonde: size {z.d + 1}, determinant '
            f'{format_fraction(z.determinant)}'
        )
        if z.step != 1:
            lines.append(
                f'odd zeta subsequence: n = {z.step}*m + {z.offset}'
            )
    if evidence.zero_bound is not None:
        b = evidence.zero_bound
        lines.append(
            f'zero bound: at most {b.bound} zeros on [{format_fraction(b.x0)}, oo)'
        )
    if evidence.shift_quotient is not None:
        lines.append(f'shift quotient: {evidence.shift_quotient.reason}')
    if evidence.membership is not None:
        lines.append(f'blocking factor: {evidence.membership.witness}')
    if evidence.relation is not None:
        r = evidence.relation
        bases = ', '.join(format_fraction(b) for b in r.bases)
        lines.append(f'relation among {bases}: exponents {r.exponents}')
    return lines


def falsify_lines(result: FalsifyResult) -> list[str]:
    windows = ', '.join(str(w) for w in result.windows)
    lines = [
        f'falsifier: {result.status} for order <= {result.dmax}, '
        f'degree <= {result.rmax}, windows {windows}'
    ]
    if result.recurrence is not None:
        lines.append(f'candidate: {result.recurrence.describe()}')
    if result.validation is not None:
        v = result.validation
        state = 'holds' if v.holds else f'fails at {v.witness}'
        lines.append(f'held-out check on {v.start}..{v.stop}: {state}')
    counts: dict[str, int] = {}
    for cell in result.cells:
        counts[cell.outcome] = counts.get(cell.outcome, 0) + 1
    summary = ', '.join(f'{k} {v}' for k, v in sorted(counts.items()))
    lines.append(f'cells: {summary}')
    return lines


__all__ = [
    'dumps', 'error_report', 'evidence_json', 'falsify_json', 'make_report',
    'to_json', 'verdict_json', 'verdict_lines',
]
