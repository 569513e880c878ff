from __future__ import annotations

import json

import pytest

from hktlab import fixtures
from hktlab.document import DocumentError, emit_document, parse_path, parse_text
from hktlab.scalars import parse_scalar


I4 = [["0", "-1", "0", "0"], ["1", "0", "0", "0"], ["0", "0", "0", "-1"], ["0", "0", "1", "0"]]


def _doc(**fields):
    base = {"mode": "lie_algebra", "dim": 4, "brackets": [], "I": I4}
    base.update(fields)
    return json.dumps(base, indent=1)


def test_malformed_scalar_located():
    raw = _doc(brackets=[[1, 2, 3, "1//2"]])
    with pytest.raises(DocumentError) as info:
        parse_text(raw)
    err = info.value
    assert "1//2" in str(err)
    line = raw.splitlines()[err.line - 1]
    assert line[err.column - 1:].startswith('"1//2"')


def test_invalid_json_located():
    with pytest.raises(DocumentError) as info:
        parse_text('{"mode": "lie_algebra",\n  "dim": 4,,}')
    assert info.value.line == 2


def test_native_numbers_rejected():
    with pytest.raises(DocumentError, match="strings"):
        parse_text(_doc(brackets=[[1, 2, 3, 0.5]]))


@pytest.mark.parametrize(
    "fields, message",
    [
        ({"brackets": [[1, 5, 3, "1"]]}, "outside"),
        ({"mode": "quaternion"}, "unknown mode"),
        ({"dim": 6}, "multiple of 4"),
        ({"I": [["1"]]}, "matrix"),
    ],
)
def test_structural_parse_errors(fields, message):
    with pytest.raises(DocumentError, match=message):
        parse_text(_doc(**fields))


def test_brackets_antisymmetrized():
    doc = parse_text(_doc(brackets=[[2, 1, 3, "1"]]))
    assert doc.brackets == ((0, 1, 2, parse_scalar("-1")),)


def test_missing_file():
    with pytest.raises(DocumentError):
        parse_path("/nonexistent/hktlab.json")


@pytest.mark.parametrize("name", fixtures.names())
def test_emit_parse_round_trip(name):
    doc = fixtures.load(name)
    again = parse_text(emit_document(doc))
    assert again == doc
    assert emit_document(again) == emit_document(doc)


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixtures.load("no-such-fixture")
