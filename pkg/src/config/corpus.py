"""
Corpus Module

Turns the corpus manifest and group input files into engine objects:
    from src.config.corpus import read_manifest, build_entry

    manifest = read_manifest()
    G = build_entry(manifest.get("sym4"))

Every failure surfaces as GroupInputError with a field path, or with the
line and column of a JSON syntax error.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import ValidationError

from src.config.settings import DEFAULT_MANIFEST, load_corpus_manifest
from src.models.reports import CorpusEntry, CorpusManifest, GroupInput, MatGroupInput
from src.services.affine import MatGroup, cyclic_matgroup, scalar_matgroup, sl2_5_matgroup
from src.services.constructions import construct_from_spec
from src.services.errors import GroupInputError
from src.services.groups import Group

logger = logging.getLogger(__name__)

Built = Union[Group, MatGroup]

_MATGROUP_CONSTRUCTIONS = {
    "cyclic_matgroup": cyclic_matgroup,
    "scalar_matgroup": scalar_matgroup,
    "sl2_5_matgroup": sl2_5_matgroup,
}


def _validation_error(e: ValidationError, source: str) -> GroupInputError:
    first = e.errors()[0]
    field = ".".join(str(part) for part in first["loc"]) or None
    return GroupInputError(f"{first['msg']} (in {source})", field=field)


def read_manifest(manifest_path: str = DEFAULT_MANIFEST) -> CorpusManifest:
    """Load and validate the corpus manifest."""
    try:
        raw = load_corpus_manifest(manifest_path)
    except (FileNotFoundError, ValueError) as e:
        raise GroupInputError(str(e), field="manifest")
    try:
        manifest = CorpusManifest.model_validate(raw)
    except ValidationError as e:
        raise _validation_error(e, manifest_path)
    logger.info(f"[CORPUS] manifest {manifest.version}: {len(manifest.entries)} entries")
    return manifest


def read_json_file(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise GroupInputError(f"input file not found: {path}", field="file")
    except json.JSONDecodeError as e:
        raise GroupInputError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", field="file")


def group_from_input(data: Dict[str, Any], source: str = "input") -> Group:
    try:
        spec = GroupInput.model_validate(data)
    except ValidationError as e:
        raise _validation_error(e, source)
    return Group(spec.degree, spec.generators, name=spec.name)


def matgroup_from_input(data: Dict[str, Any], source: str = "input") -> MatGroup:
    if "construct" in data:
        name = data["construct"]
        builder = _MATGROUP_CONSTRUCTIONS.get(name)
        if builder is None:
            raise GroupInputError(f"unknown matrix group construction '{name}'", field="construct")
        try:
            return builder(*data.get("params", []))
        except TypeError as e:
            raise GroupInputError(f"bad parameters for {name}: {e}", field="params")
    try:
        spec = MatGroupInput.model_validate(data)
    except ValidationError as e:
        raise _validation_error(e, source)
    return MatGroup(spec.p, spec.n, spec.generators, name=spec.name)


def parse_input(data: Any, source: str = "input") -> Built:
    """
    Dispatch on shape: {"p", "n", ...} is a matrix group, {"degree", ...} a
    permutation group, anything else a construction spec.
    """
    if isinstance(data, dict):
        if "p" in data and "n" in data:
            return matgroup_from_input(data, source)
        if "degree" in data:
            return group_from_input(data, source)
        if data.get("construct") in _MATGROUP_CONSTRUCTIONS:
            return matgroup_from_input(data, source)
    return construct_from_spec(data)


def load_input_file(path: str) -> Built:
    return parse_input(read_json_file(path), source=path)


_CALL = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")

_MATGROUP_ALIASES = {
    "sl2_5": "sl2_5_matgroup",
    "cyclic": "cyclic_matgroup",
    "scalar": "scalar_matgroup",
}


def _call_arguments(text: str) -> List[Any]:
    try:
        args = json.loads(f"[{text}]") if text and text.strip() else []
    except json.JSONDecodeError as e:
        raise GroupInputError(f"cannot read arguments '{text}': {e.msg}", field="params")
    return args


def parse_group_argument(text: str) -> Built:
    """A JSON file path or a construction call such as frobenius(17,1,4)."""
    if Path(text).is_file():
        return load_input_file(text)
    match = _CALL.match(text)
    if match is None:
        raise GroupInputError(f"'{text}' is neither a file nor a construction", field="input")
    name, args = match.group(1), _call_arguments(match.group(2) or "")
    if name in _MATGROUP_CONSTRUCTIONS:
        return matgroup_from_input({"construct": name, "params": args})
    return construct_from_spec([name, args])


def parse_matgroup_argument(text: Optional[str], p: Optional[int] = None, n: Optional[int] = None,
                            gens: Optional[str] = None) -> MatGroup:
    """
    Matrix group from a file, a named construction (sl2_5 takes --p), or
    --p/--n/--gens with the generators as a JSON list of matrices.
    """
    if text is not None:
        if Path(text).is_file():
            built = load_input_file(text)
        else:
            match = _CALL.match(text)
            if match is None:
                raise GroupInputError(f"'{text}' is neither a file nor a construction", field="input")
            name = _MATGROUP_ALIASES.get(match.group(1), match.group(1))
            args = _call_arguments(match.group(2) or "")
            if not args and p is not None:
                args = [p]
            built = matgroup_from_input({"construct": name, "params": args})
        if not isinstance(built, MatGroup):
            raise GroupInputError("expected a matrix group", field="input")
        return built
    if p is None or n is None:
        raise GroupInputError("a matrix group needs --p and --n", field="p")
    try:
        mats = json.loads(gens) if gens else []
    except json.JSONDecodeError as e:
        raise GroupInputError(f"invalid JSON at column {e.colno}: {e.msg}", field="gens")
    return matgroup_from_input({"p": p, "n": n, "generators": mats}, source="--gens")


def build_entry(entry: CorpusEntry, base_dir: Optional[str] = None) -> Built:
    """Group or MatGroup for a manifest entry; relative files resolve against base_dir."""
    if entry.file is not None:
        path = Path(entry.file)
        if not path.is_absolute() and base_dir:
            path = Path(base_dir) / path
        built = load_input_file(str(path))
    elif entry.group is not None:
        built = Group(entry.group.degree, entry.group.generators, name=entry.group.name or entry.id)
    elif entry.matgroup is not None:
        data = entry.matgroup
        if isinstance(data, MatGroupInput):
            data = data.model_dump(exclude_none=True)
        built = matgroup_from_input(dict(data), source=entry.id)
    else:
        built = parse_input(entry.construct, source=entry.id)
    built.name = entry.id
    return built


def resolve_entry(manifest: CorpusManifest, entry_id: str) -> CorpusEntry:
    entry = manifest.get(entry_id)
    if entry is None:
        raise GroupInputError(f"no corpus entry with id '{entry_id}'", field="id")
    return entry
