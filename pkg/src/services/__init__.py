"""
Services package - group engine, character tables and verifiers
"""

from .cache import TableCache, get_cache
from .errors import (
    CoprimalityError,
    GroupInputError,
    ResourceCapError,
    TableConsistencyError,
    VerificationFailure,
)

__all__ = [
    'TableCache',
    'get_cache',
    'CoprimalityError',
    'GroupInputError',
    'ResourceCapError',
    'TableConsistencyError',
    'VerificationFailure',
]
