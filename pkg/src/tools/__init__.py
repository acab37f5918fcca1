"""
Tools package - CLI command implementations and verification suites
"""

from .commands import (
    cmd_affine,
    cmd_analyze,
    cmd_bound,
    cmd_classify_prime,
    cmd_sp,
    cmd_table,
    cmd_verify,
)
from .suites import SUITES, run_suite

__all__ = [
    'cmd_affine',
    'cmd_analyze',
    'cmd_bound',
    'cmd_classify_prime',
    'cmd_sp',
    'cmd_table',
    'cmd_verify',
    'SUITES',
    'run_suite',
]
