import json

import pytest

from src.config.corpus import (
    build_entry,
    group_from_input,
    load_input_file,
    parse_group_argument,
    parse_matgroup_argument,
    read_json_file,
    read_manifest,
    resolve_entry,
)
from src.models.reports import CorpusEntry
from src.services.affine import MatGroup
from src.services.errors import CoprimalityError, GroupInputError
from src.services.groups import Group


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_shipped_manifest_builds():
    manifest = read_manifest()
    ids = [e.id for e in manifest.entries]
    assert len(ids) == len(set(ids))
    for entry in manifest.entries:
        built = build_entry(entry)
        assert built.name == entry.id
        assert isinstance(built, MatGroup) == (entry.kind == "matgroup")


def test_manifest_lookup():
    manifest = read_manifest()
    assert resolve_entry(manifest, "sym4").tags == ["sym"]
    with pytest.raises(GroupInputError):
        resolve_entry(manifest, "sym99")


def test_duplicate_ids_are_rejected(tmp_path):
    path = _write(tmp_path / "m.json", {"version": "t", "entries": [
        {"id": "a", "construct": ["cyclic", [2]]},
        {"id": "a", "construct": ["cyclic", [3]]},
    ]})
    with pytest.raises(GroupInputError):
        read_manifest(path)


def test_entry_needs_exactly_one_source(tmp_path):
    path = _write(tmp_path / "m.json", {"version": "t", "entries": [
        {"id": "a", "construct": ["cyclic", [2]], "group": {"degree": 2, "generators": [[1, 0]]}},
    ]})
    with pytest.raises(GroupInputError):
        read_manifest(path)


def test_syntax_errors_report_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"degree": 3,\n "generators": [[1, 0, 2]', encoding="utf-8")
    with pytest.raises(GroupInputError, match="line 2"):
        read_json_file(str(path))
    with pytest.raises(GroupInputError):
        read_manifest(str(path))
    with pytest.raises(GroupInputError):
        read_manifest(str(tmp_path / "missing.json"))


def test_group_input_validation():
    G = group_from_input({"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    assert G.order == 6
    with pytest.raises(GroupInputError) as info:
        group_from_input({"degree": 3, "generators": [[0, 0, 1]]})
    assert info.value.field == "generators[0]"
    with pytest.raises(GroupInputError):
        group_from_input({"degree": 0})


def test_input_files(tmp_path):
    G = load_input_file(_write(tmp_path / "g.json", {"degree": 4, "generators": [[1, 2, 3, 0]]}))
    assert isinstance(G, Group) and G.order == 4
    H = load_input_file(_write(tmp_path / "h.json", {"p": 5, "n": 1, "generators": [[[2]]]}))
    assert isinstance(H, MatGroup) and H.order == 4
    F = load_input_file(_write(tmp_path / "f.json", {"construct": "frobenius", "params": [7, 1, 3]}))
    assert F.order == 21


def test_group_arguments(tmp_path):
    assert parse_group_argument("frobenius(17,1,4)").order == 68
    assert parse_group_argument("sym(4)").order == 24
    assert parse_group_argument("quaternion").order == 8
    path = _write(tmp_path / "g.json", {"degree": 3, "generators": [[1, 2, 0]]})
    assert parse_group_argument(path).order == 3
    with pytest.raises(GroupInputError):
        parse_group_argument("sym(4")
    with pytest.raises(GroupInputError):
        parse_group_argument("sym(x)")


def test_matrix_group_arguments():
    assert parse_matgroup_argument("sl2_5", p=11).order == 120
    assert parse_matgroup_argument("cyclic(13,3)").order == 3
    assert parse_matgroup_argument(None, p=5, n=1, gens="[[[2]]]").order == 4
    with pytest.raises(GroupInputError):
        parse_matgroup_argument(None, p=5, n=1, gens="[[[2]]")
    with pytest.raises(GroupInputError):
        parse_matgroup_argument(None, p=5)
    with pytest.raises(CoprimalityError):
        parse_matgroup_argument(None, p=3, n=2, gens="[[[1,1],[0,1]]]")
    with pytest.raises(GroupInputError):
        parse_matgroup_argument("sym(3)")


def test_file_entries_resolve_against_base_dir(tmp_path):
    _write(tmp_path / "g.json", {"degree": 3, "generators": [[1, 2, 0]]})
    entry = CorpusEntry(id="c3file", file="g.json")
    built = build_entry(entry, base_dir=str(tmp_path))
    assert built.order == 3
    assert built.name == "c3file"
