"""
Configuration package for the rationality lab
"""

from .settings import (
    EngineConfig,
    TOOL_VERSION,
    SCHEMA_TAGS,
    EXIT_CODES,
    DEFAULT_MANIFEST,
    load_corpus_manifest,
)

__all__ = [
    'EngineConfig',
    'TOOL_VERSION',
    'SCHEMA_TAGS',
    'EXIT_CODES',
    'DEFAULT_MANIFEST',
    'load_corpus_manifest',
]
