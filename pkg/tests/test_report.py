"""
test_report
~~~~~~~~~~~

Unit tests for :mod:`holoscope.report`.
"""
import json
from fractions import Fraction

import pytest

from holoscope import report as rp
from holoscope.classifier import classify
from holoscope.exactnum import Ball
from holoscope.model import (
    ClassTag,
    Evidence,
    JobConfig,
    SingularityWitness,
    Verdict
)
from holoscope.parser import parse
from holoscope.recurrence import make_recurrence


# Fixtures.
@pytest.fixture
def quick():
    """Settings that keep the falsifier small."""
    return JobConfig(dmax=1, rmax=1, windows=(1,), verify_len=40, holdout=20)


@pytest.fixture
def witness():
    return SingularityWitness('0', 'branch point', 'log')


# Tests for to_json.
def test_to_json_fraction():
    """Rationals are written as strings."""
    assert rp.to_json(Fraction(-3, 4)) == '-3/4'
    assert rp.to_json(Fraction(5)) == '5'


def test_to_json_ball():
    """Balls are written as mantissas and exponents."""
    ball = Ball(Fraction(3, 8), Fraction(1, 4))
    assert rp.to_json(ball) == {
        'center_mantissa': 3,
        'center_exponent': -3,
        'radius_mantissa': 1,
        'radius_exponent': -2,
    }


def test_to_json_recurrence():
    """Recurrences keep their coefficients and range."""
    rec = make_recurrence([[-2], [1]])
    value = rp.to_json(rec)
    assert value['coeffs'] == ['-2', '1']
    assert value['valid_from'] == 1
    assert value['order'] == 1
    assert value['field'] == 'QQ'


def test_to_json_named_tuple(witness):
    """Named tuples become objects."""
    assert rp.to_json(witness) == {
        'location': '0',
        'nature': 'branch point',
        'rule': 'log',
    }


def test_to_json_unknown_type():
    """Values with no encoding are an error."""
    with pytest.raises(TypeError):
        rp.to_json(object())


# Tests for evidence_json.
def test_evidence_json(witness):
    """Each evidence item is tagged with its kind."""
    items = rp.evidence_json(Evidence(witness=witness))
    assert items == [{
        'kind': 'witness',
        'location': '0',
        'nature': 'branch point',
        'rule': 'log',
    }]


# Tests for reports.
def test_report_round_trip(quick):
    """Reports are plain JSON and read back equal."""
    verdict = classify(parse('(x^2 + 1)/(x + 3)'), quick)
    report = rp.make_report(
        'classify', quick, 'verdict',
        rp.verdict_json(verdict), rp.evidence_json(verdict.evidence), 12
    )
    assert json.loads(rp.dumps(report)) == report
    assert report['verdict']['status'] == 'Holonomic'
    assert report['verdict']['recurrence']['order'] == 1
    assert report['timing_ms'] == 12


def test_report_round_trip_non_holonomic(quick):
    """Evidence and citations survive the round trip."""
    verdict = classify(parse('zeta(2*x + 1)'), quick)
    report = rp.make_report(
        'classify', quick, 'verdict',
        rp.verdict_json(verdict), rp.evidence_json(verdict.evidence)
    )
    loaded = json.loads(rp.dumps(report))
    assert loaded == report
    assert loaded['verdict']['citation'] == 'odd-zeta'
    assert loaded['evidence'][0]['kind'] == 'zeta_odd'
    assert loaded['evidence'][0]['determinant'] == '-3/4'


def test_config_json():
    """Declared constants are written as an object."""
    config = JobConfig(constants=(('a', '1/3'),))
    values = rp.config_json(config)
    assert values['constants'] == {'a': '1/3'}
    assert values['windows'] == [1, 64, 512]


def test_error_report():
    """Errors carry a code and a message."""
    report = rp.error_report('guess', 'FileError', 'No such file.')
    assert report == {
        'command': 'guess',
        'error': {'code': 'FileError', 'message': 'No such file.'},
    }


# Tests for text output.
def test_verdict_lines_unknown():
    """An empty unknown verdict is one line."""
    verdict = Verdict('Unknown', ClassTag('Other'))
    assert rp.verdict_lines(verdict) == ['Unknown (class Other)']


def test_verdict_lines_non_holonomic(witness):
    """Citations and evidence are listed."""
    verdict = Verdict(
        'NonHolonomic',
        ClassTag('LogArctan', ('log',)),
        citation='log-arctan-field',
        evidence=Evidence(witness=witness)
    )
    lines = rp.verdict_lines(verdict)
    assert lines[0] == 'NonHolonomic (class LogArctan)'
    assert lines[1].startswith('citation: log-arctan-field: ')
    assert lines[2] == 'witness: branch point at 0 (log)'
