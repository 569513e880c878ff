from __future__ import annotations

import json

import pytest

from hktlab import fixtures
from hktlab.cli import main, parse_class
from hktlab.document import DocumentError, emit_document, parse_text
from hktlab.report import render, run
from hktlab.scalars import ONE, parse_scalar


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _machine(capsys, *argv):
    code, out, _ = _run(capsys, *argv, "--format", "machine")
    return code, json.loads(out)


def test_nilmanifold_report(capsys):
    code, data = _machine(capsys, "report", "nilmanifold-lw")
    assert code == 0
    assert data["cohomology"]["del"]["dims"][1:3] == [3, 4]
    assert data["structure"]["verdicts"]["abelian"] == "Fails"
    assert data["massey"]["nontrivial"]
    assert data["massey"]["certificate"]


def test_su3_cohomology_and_massey(capsys):
    code, coh = _machine(capsys, "cohomology", "su3", "--theory", "del")
    assert code == 0 and coh["cohomology"]["del"]["dims"] == [1, 1, 0, 0, 0]
    assert coh["structure"]["verdicts"]["hkt"] == "Holds"
    code, mas = _machine(capsys, "massey", "su3", "--scan")
    assert code == 0 and mas["massey"]["nontrivial"] == []


def test_malformed_scalar_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"mode": "lie_algebra", "dim": 4,\n "brackets": [[1, 2, 3, "1//2"]]}')
    code, out, err = _run(capsys, "validate", str(path))
    assert code == 2
    assert "line 2, column 25" in err and out == ""


@pytest.mark.parametrize("name", fixtures.NEGATIVE[:3])
def test_structural_failure_exit_code(capsys, name):
    code, data = _machine(capsys, "report", name)
    assert code == 1
    assert data["structure"]["failures"]
    assert "cohomology" not in data


def test_insufficient_data_exit_code(capsys):
    code, data = _machine(capsys, "check", "su3", "balanced")
    assert code == 3 and data["check"]["verdict"] == "Unknown"
    code, _, err = _run(capsys, "cohomology", "solvmanifold", "--theory", "bc")
    assert code == 3 and "J data" in err


def test_check_verdicts(capsys):
    assert _machine(capsys, "check", "su3", "hlc")[1]["check"]["verdict"] == "Fails"
    assert _machine(capsys, "check", "flat-torus-n2", "ddlambda-lemma")[1]["check"]["verdict"] == "Holds"
    assert _machine(capsys, "check", "nil-abelian", "identities")[1]["check"]["verdict"] == "Holds"


def test_triple_option(capsys):
    code, data = _machine(capsys, "massey", "solvmanifold", "--triple", "1", "2", "2", "--denominator", "pointed")
    assert code == 0
    triple = data["massey"]["triple"]
    assert triple["verdict"] == "nontrivial" and triple["lambda"] == "(-2i)φ^{3}"


def test_parse_class():
    assert parse_class("-2i:3") == (1, {(2,): parse_scalar("-2i")})
    assert parse_class("21,1/2:34") == (2, {(0, 1): -ONE, (2, 3): parse_scalar("1/2")})
    with pytest.raises(DocumentError):
        parse_class("1,23")


def test_harmonic_command(capsys):
    code, data = _machine(capsys, "harmonic", "flat-torus-n2", "--laplacian", "aeppli")
    assert code == 0 and data["harmonic"]["dims"] == [1, 4, 6, 4, 1]


def test_export_round_trip(capsys, tmp_path):
    code, out, _ = _run(capsys, "export", "nilmanifold-lw")
    assert code == 0
    path = tmp_path / "copy.json"
    path.write_text(out)
    assert _machine(capsys, "report", str(path))[1] == _machine(capsys, "report", "nilmanifold-lw")[1]


@pytest.mark.parametrize("name", fixtures.names())
def test_machine_report_deterministic(name, monkeypatch):
    doc = fixtures.load(name)
    first = render(run(doc, "report"), "machine")
    monkeypatch.setenv("HKTLAB_THREADS", "4")
    second = render(run(parse_text(emit_document(doc)), "report"), "machine")
    assert first == second


def test_text_and_machine_carry_same_facts():
    report = run(fixtures.load("su3"), "report")
    text = render(report, "text")
    data = json.loads(render(report, "machine"))
    for theory, entry in data["cohomology"].items():
        assert f"dims: {entry['dims']}" in text
    for key, verdict in data["structure"]["verdicts"].items():
        assert f"{key}: {verdict}" in text


def test_fixture_listing(capsys):
    code, out, _ = _run(capsys, "fixtures")
    assert code == 0 and "su3" in out.split()


def test_span_scan_option(capsys):
    code, data = _machine(capsys, "massey", "nilmanifold-lw", "--span", "--budget", "100")
    assert code == 0
    assert data["massey"]["scope"] == "basis and pairwise sums"
    assert data["massey"]["truncated_at"] == 100
