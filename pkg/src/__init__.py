"""
Rationality Lab Source Code Package

Organized structure:
- config: Engine settings and corpus loading
- models: Value types (permutations, cyclotomic integers) and report schemas
- services: Group engine, character tables, rationality, affine class counts, bounds
- tools: Command implementations and verification suites
- handlers: Worker-pool dispatch of corpus entries
"""

__version__ = "1.0.0"

from .config import EngineConfig, TOOL_VERSION
from .models import CyclotomicValue, Permutation

__all__ = [
    'EngineConfig',
    'TOOL_VERSION',
    'CyclotomicValue',
    'Permutation',
]
