"""
Models package - value types and report schemas
"""

from .cyclotomic import CyclotomicValue
from .permutation import Permutation
from .reports import (
    AnalysisReport,
    BoundEvaluation,
    CheckReport,
    ClassCountReport,
    CorpusEntry,
    CorpusManifest,
    DetectorVerdict,
    EntryResult,
    GroupInput,
    LowerBoundCertificate,
    MatGroupInput,
    McKayNavarroReport,
    OrbitRecord,
    PrimeConditionVerdict,
    RationalityCounts,
    RationalityProfile,
    RunReport,
    SpSet,
    fraction_str,
)

__all__ = [
    'CyclotomicValue',
    'Permutation',
    'AnalysisReport',
    'BoundEvaluation',
    'CheckReport',
    'ClassCountReport',
    'CorpusEntry',
    'CorpusManifest',
    'DetectorVerdict',
    'EntryResult',
    'GroupInput',
    'LowerBoundCertificate',
    'MatGroupInput',
    'McKayNavarroReport',
    'OrbitRecord',
    'PrimeConditionVerdict',
    'RationalityCounts',
    'RationalityProfile',
    'RunReport',
    'SpSet',
    'fraction_str',
]
