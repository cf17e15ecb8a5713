"""
cli
~~~

Command line interface for the holoscope package.
"""
import logging
import sys
import time
from argparse import ArgumentParser, Namespace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, NamedTuple, Sequence, Union

import mpmath

from holoscope import report as rp
from holoscope.catalog import catalog, get_entry
from holoscope.classifier import classify
from holoscope.errors import HoloscopeError, MalformedLine, NonContiguousIndex
from holoscope.exactnum import Ball
from holoscope.expr import ExprOracle
from holoscope.init import get_config, make_job_config, parse_windows
from holoscope.model import JobConfig
from holoscope.parser import (
    make_cfield,
    parse,
    parse_declaration,
    parse_recurrence
)
from holoscope.prover import falsify
from holoscope.recurrence import (
    SeqOracle,
    TermsOracle,
    closure,
    closures,
    eventual_period
)
from holoscope.utility import parse_fraction


log = logging.getLogger(__name__)


# Exit codes.
DEFINITE = 0
FAILED = 1
INCONCLUSIVE = 2


# Types.
class Outcome(NamedTuple):
    """What a command produced.

    :param code: The exit code.
    :param lines: The text report.
    :param key: `verdict` or `result`, the key of the JSON payload.
    :param payload: The JSON payload.
    :param evidence: JSON evidence items.
    """
    code: int
    lines: list[str]
    key: str
    payload: Any
    evidence: Sequence[dict] = ()


Command = Callable[[Namespace, JobConfig], Outcome]


# Input.
def read_bfile(path: Union[Path, str]) -> list[tuple[int, Fraction]]:
    """Read a b-file of `n value` lines. Blank lines and lines
    starting with `#` are skipped. Values may be integers or `p/q`.

    :param path: The file.
    :return: The (index, term) pairs.
    :rtype: list

    Usage:

        >>> read_bfile('tests/data/harmonic.bfile')[:2]
        [(1, Fraction(1, 1)), (2, Fraction(3, 2))]
    """
    pairs: list[tuple[int, Fraction]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith('#'):
                continue
            fields = text.split()
            if len(fields) != 2:
                raise MalformedLine(lineno, text)
            try:
                n = int(fields[0])
                value = parse_fraction(fields[1])
            except (ValueError, ZeroDivisionError):
                raise MalformedLine(lineno, text)
            if pairs and n != pairs[-1][0] + 1:
                raise NonContiguousIndex(n)
            pairs.append((n, value))
    return pairs


def get_oracle(args: Namespace) -> SeqOracle:
    """The sequence named by --bfile or --builtin."""
    if args.bfile:
        return TermsOracle(read_bfile(args.bfile))
    return get_entry(args.builtin).build()


def ball_text(value: Ball, digits: int = 30) -> str:
    """Write a ball as a decimal center and radius."""
    with mpmath.workdps(digits + 10):
        mid = mpmath.mpf(value.mid.numerator) / value.mid.denominator
        rad = mpmath.mpf(value.rad.numerator) / value.rad.denominator
        return f'{mpmath.nstr(mid, digits)} +/- {mpmath.nstr(rad, 3)}'


# Commands.
def classify_expr(args: Namespace, job: JobConfig) -> Outcome:
    """Decide whether a closed form gives a holonomic sequence."""
    cfield = make_cfield(job.constants)
    e = parse(args.expr, [name for name, _ in job.constants])
    verdict = classify(e, job, cfield)
    code = INCONCLUSIVE if verdict.status == 'Unknown' else DEFINITE
    return Outcome(
        code,
        rp.verdict_lines(verdict),
        'verdict',
        rp.verdict_json(verdict),
        rp.evidence_json(verdict.evidence)
    )


def _search(args: Namespace, job: JobConfig, definite: Sequence[str]) -> Outcome:
    result = falsify(
        get_oracle(args), job.dmax, job.rmax, job.windows,
        job.prec_start, job.prec_cap, job.holdout
    )
    code = DEFINITE if result.status in definite else INCONCLUSIVE
    evidence = [
        {'kind': 'refutation', **rp.to_json(cert)}
        for cert in result.certificates
    ]
    return Outcome(
        code,
        rp.falsify_lines(result),
        'result',
        rp.falsify_json(result),
        evidence
    )


def guess(args: Namespace, job: JobConfig) -> Outcome:
    """Search a sequence for a recurrence within the bounds."""
    return _search(args, job, ('candidate', 'refuted'))


def refute(args: Namespace, job: JobConfig) -> Outcome:
    """Certify that no recurrence within the bounds holds."""
    return _search(args, job, ('refuted',))


def combine(args: Namespace, job: JobConfig) -> Outcome:
    """A recurrence for a sum, product, subsequence or interlacement."""
    cfield = make_cfield(job.constants)
    recs = [parse_recurrence(text, cfield) for text in args.recs]
    params = {}
    if args.kind == 'subsequence':
        params = {'a': args.a, 'b': args.b}
    rec = closure(args.kind, recs, **params)
    lines = [str(rec), rec.describe()]
    return Outcome(DEFINITE, lines, 'result', {'recurrence': rp.to_json(rec)})


def period(args: Namespace, job: JobConfig) -> Outcome:
    """The preperiod and period of a sequence with a constant
    coefficient recurrence.
    """
    pairs = read_bfile(args.bfile)
    rec = parse_recurrence(args.rec, make_cfield(job.constants))
    first = pairs[0][0] if pairs else 1
    preperiod, length = eventual_period(
        [value for _, value in pairs], rec, first
    )
    lines = [f'preperiod {preperiod}, period {length}']
    payload = {'preperiod': preperiod, 'period': length}
    return Outcome(DEFINITE, lines, 'result', payload)


def evaluate(args: Namespace, job: JobConfig) -> Outcome:
    """Evaluate a closed form at an index."""
    cfield = make_cfield(job.constants)
    e = parse(args.expr, [name for name, _ in job.constants])
    value = ExprOracle(e, cfield, first=args.n)(args.n, job.prec_start)
    if isinstance(value, Ball):
        text = ball_text(value)
    else:
        text = rp.to_json(value)
    payload = {'n': args.n, 'exact': not isinstance(value, Ball)}
    payload['value'] = rp.to_json(value)
    return Outcome(DEFINITE, [f'f({args.n}) = {text}'], 'result', payload)


def list_catalog(args: Namespace, job: JobConfig) -> Outcome:
    """List the built-in sequences."""
    entries = [catalog[key] for key in sorted(catalog)]
    lines = [f'{entry.key}: {entry.description}' for entry in entries]
    payload = [
        {'key': e.key, 'description': e.description, 'expr': e.text or None}
        for e in entries
    ]
    return Outcome(DEFINITE, lines, 'result', payload)


commands: dict[str, Command] = {
    'classify': classify_expr,
    'guess': guess,
    'refute': refute,
    'closure': combine,
    'period': period,
    'eval': evaluate,
    'catalog': list_catalog,
}


# Output.
def write_output(lines: Union[Sequence[str], str]) -> None:
    """Write the output to the terminal."""
    if isinstance(lines, str):
        lines = [lines, ]

    for line in lines:
        print(line)


def write_error(command: str, code: str, message: str, fmt: str) -> None:
    """Report an error on stderr, and as JSON on stdout in JSON mode."""
    print(f'error: {code}: {message}', file=sys.stderr)
    if fmt == 'json':
        write_output(rp.dumps(rp.error_report(command, code, message)))


# Command parsing.
def build_parser() -> ArgumentParser:
    """The argument parser, with the shared flags on every command."""
    common = ArgumentParser(add_help=False)
    common.add_argument(
        '--config', '-C',
        help='Use the given custom config file.',
        action='store',
        type=str
    )
    common.add_argument(
        '--format',
        help='The output format.',
        choices=('text', 'json')
    )
    common.add_argument(
        '--prec',
        help='The starting precision in bits.',
        type=int
    )
    common.add_argument(
        '--prec-cap',
        help='The largest precision in bits.',
        type=int
    )
    common.add_argument(
        '--dmax',
        help='The largest recurrence order searched.',
        type=int
    )
    common.add_argument(
        '--rmax',
        help='The largest coefficient degree searched.',
        type=int
    )
    common.add_argument(
        '--windows',
        help='Comma separated window starts, such as "1, 64".',
        type=str
    )
    common.add_argument(
        '--verify-len',
        help='How many terms a recurrence is checked on.',
        type=int
    )
    common.add_argument(
        '--const',
        help='Declare a constant NAME or NAME=VALUE.',
        action='append',
        default=[]
    )
    common.add_argument(
        '--timing',
        help='Report the elapsed time.',
        action='store_true'
    )
    common.add_argument(
        '--verbose', '-v',
        help='Log more. Give twice for debugging output.',
        action='count',
        default=0
    )

    p = ArgumentParser(
        description='Decide whether sequences are holonomic.',
        prog='holoscope',
    )
    sub = p.add_subparsers(dest='command', required=True)

    cmd = sub.add_parser(
        'classify', parents=[common],
        help='Classify the sequence f(n) of a closed form.'
    )
    cmd.add_argument('expr', help='The closed form in x.')

    for name, text in (
        ('guess', 'Search a sequence for a recurrence.'),
        ('refute', 'Certify that a sequence has no small recurrence.'),
    ):
        cmd = sub.add_parser(name, parents=[common], help=text)
        source = cmd.add_mutually_exclusive_group(required=True)
        source.add_argument('--bfile', help='A file of terms.', type=str)
        source.add_argument(
            '--builtin',
            help='A built-in sequence.',
            choices=sorted(catalog)
        )

    cmd = sub.add_parser(
        'closure', parents=[common],
        help='Combine recurrences.'
    )
    cmd.add_argument('kind', choices=sorted(closures))
    cmd.add_argument(
        'recs',
        help='Recurrences written "p0, p1, ..., pd @ n0".',
        nargs='+'
    )
    cmd.add_argument('--a', help='The step of a subsequence.', type=int, default=1)
    cmd.add_argument('--b', help='The offset of a subsequence.', type=int, default=0)

    cmd = sub.add_parser(
        'period', parents=[common],
        help='Find the eventual period of a sequence.'
    )
    cmd.add_argument('--bfile', help='A file of terms.', required=True)
    cmd.add_argument(
        '--rec',
        help='A constant coefficient recurrence for the terms.',
        required=True
    )

    cmd = sub.add_parser(
        'eval', parents=[common],
        help='Evaluate a closed form at an index.'
    )
    cmd.add_argument('expr', help='The closed form in x.')
    cmd.add_argument('--n', help='The index.', type=int, required=True)

    sub.add_parser(
        'catalog', parents=[common],
        help='List the built-in sequences.'
    )
    return p


def load_job(args: Namespace) -> JobConfig:
    """The job configuration from config files and flags."""
    config = get_config(args.config or '')
    constants = None
    if args.const:
        constants = dict(parse_declaration(text) for text in args.const)
    windows = parse_windows(args.windows) if args.windows else None
    return make_job_config(
        config,
        prec_start=args.prec,
        prec_cap=args.prec_cap,
        dmax=args.dmax,
        rmax=args.rmax,
        windows=windows,
        verify_len=args.verify_len,
        constants=constants,
        format=args.format,
        timing=True if args.timing else None
    )


def run(argv: Sequence[str]) -> int:
    """Run a command line and return its exit code."""
    args = build_parser().parse_args(argv)
    levels = (logging.WARNING, logging.INFO, logging.DEBUG)
    logging.basicConfig(
        level=levels[min(args.verbose, 2)],
        stream=sys.stderr
    )

    fmt = args.format or 'text'
    try:
        job = load_job(args)
        fmt = job.format
        log.info('Running %s.', args.command)
        began = time.perf_counter()
        outcome = commands[args.command](args, job)
        elapsed = time.perf_counter() - began
    except HoloscopeError as ex:
        log.debug('%s failed.', args.command, exc_info=True)
        write_error(args.command, ex.code, str(ex), fmt)
        return FAILED
    except ValueError as ex:
        write_error(args.command, 'UsageError', str(ex), fmt)
        return FAILED
    except OSError as ex:
        write_error(args.command, 'FileError', str(ex), fmt)
        return FAILED

    if fmt == 'json':
        timing_ms = round(elapsed * 1000) if job.timing else None
        document = rp.make_report(
            args.command, job, outcome.key, outcome.payload,
            outcome.evidence, timing_ms
        )
        write_output(rp.dumps(document))
    else:
        lines = outcome.lines
        if job.timing:
            lines = lines + [f'time: {round(elapsed * 1000)} ms']
        write_output(lines)
    return outcome.code


def parse_cli() -> int:
    """Response to commands passed through the CLI."""
    return run(sys.argv[1:])


def main() -> None:
    """The console script entry point."""
    sys.exit(parse_cli())
