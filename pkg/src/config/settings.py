"""
Configuration and Settings Module
Centralized configuration for the rationality lab engine
"""

from pathlib import Path
import os
import json

from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class EngineConfig:
    """Configuration class for engine caps, seeds and caching."""

    # Enumeration caps
    MAX_GROUP_ORDER: int = int(os.getenv("RATLAB_MAX_GROUP_ORDER", "1000000"))
    MAX_CLASSES: int = int(os.getenv("RATLAB_MAX_CLASSES", "800"))
    MAX_VECTORS: int = int(os.getenv("RATLAB_MAX_VECTORS", "1000000"))
    ORACLE_CAP: int = int(os.getenv("RATLAB_ORACLE_CAP", "100000"))

    # Determinism
    SEED: int = int(os.getenv("RATLAB_SEED", "1729"))

    # Table cache
    CACHE_ENABLED: bool = _env_bool("RATLAB_CACHE", "true")
    CACHE_DIR: str = os.getenv(
        "RATLAB_CACHE_DIR",
        str(Path(os.getenv("XDG_CACHE_HOME", str(Path.home() / ".cache"))) / "ratlab"),
    )

    # Interval arithmetic working precision (bits)
    INTERVAL_PREC: int = int(os.getenv("RATLAB_INTERVAL_PREC", "128"))

    # Largest prime of the closed-form k(HV) sweep run by the closed-form suite
    CLOSED_FORM_MAX_P: int = int(os.getenv("RATLAB_CLOSED_FORM_MAX_P", "200"))

    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")


TOOL_VERSION = "1.0.0"

# Schema tags stamped on every JSON document we emit or accept
SCHEMA_TAGS = {
    "table": "ratlab/table/1",
    "profile": "ratlab/profile/1",
    "analysis": "ratlab/analysis/1",
    "classcount": "ratlab/classcount/1",
    "certificate": "ratlab/certificate/1",
    "run": "ratlab/run/1",
    "manifest": "ratlab/manifest/1",
    "group": "ratlab/group/1",
    "matgroup": "ratlab/matgroup/1",
}

# Exit codes of the command-line surface
EXIT_CODES = {
    "success": 0,
    "assertion": 1,
    "input": 2,
    "resource": 3,
}

DEFAULT_MANIFEST = str(Path(__file__).resolve().parents[2] / "corpus_manifest.json")


def load_corpus_manifest(manifest_path: str = DEFAULT_MANIFEST) -> dict:
    """Load the corpus manifest from a JSON file."""
    try:
        with open(manifest_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise FileNotFoundError(f"Corpus manifest file not found: {manifest_path}")
    except json.JSONDecodeError as e:
        raise ValueError(
            f"Invalid JSON in corpus manifest (line {e.lineno}, column {e.colno}): {e.msg}"
        )
