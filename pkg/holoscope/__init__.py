"""
__init__
~~~~~~~~

Decide whether sequences given by closed forms or by their terms are
holonomic, with certificates for the answer.
"""
from holoscope.catalog import get_entry
from holoscope.classifier import classify
from holoscope.exactnum import Ball, zeta_ball
from holoscope.init import get_config, make_job_config
from holoscope.parser import parse, parse_recurrence
from holoscope.prover import (
    elimination_trace,
    falsify,
    rolle_zero_bound,
    vandermonde_certificate
)
from holoscope.recurrence import (
    annihilates,
    closure,
    constant_tail_recurrence,
    eventual_period,
    make_recurrence,
    unroll
)
