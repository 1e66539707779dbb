import json

import pytest
from jsonschema import validate

from qmfrob import cli
from qmfrob.cli import (GOLDEN_TABLE, cmd_asd, cmd_charpoly, cmd_factor,
                        cmd_isogeny, cmd_norms, cmd_qexp, cmd_splitting,
                        cmd_table, golden_A)

import importlib.resources as resources


def _schema():
    path = resources.files("qmfrob") / "schemas" / "report.schema.json"
    return json.loads(path.read_text())


def test_reports_validate_against_schema():
    schema = _schema()
    for report in (cmd_splitting(7), cmd_factor(5), cmd_qexp("F1", 120, "json")):
        validate(report.to_json(), schema)


def test_splitting_report():
    rep = cmd_splitting(7)
    assert rep.results["split_fields"] == [-3]
    assert rep.passed


def test_qexp_first_line():
    rep = cmd_qexp("F1", 240, "tsv")
    first = rep.results.splitlines()[0].split("\t")
    assert first[0] == "4"
    assert json.loads(first[1])[0] == "1/1"


def test_factor_report_matches_golden():
    rep = cmd_factor(5)
    assert rep.passed
    fact = rep.results["factorization"]
    assert fact["kind"] == "conjugate_pair"
    assert fact["B"] == -25


def test_charpoly_both_engines():
    rep = cmd_charpoly(7, engine="both")
    assert rep.passed
    assert rep.results["count"] == rep.results["congruence"] == [0, 10, 0, 2401]


def test_reports_are_deterministic():
    a = cmd_table(5, 7, engine="congruence").dumps()
    b = cmd_table(5, 7, engine="congruence").dumps()
    assert a == b


def test_cli_exit_codes():
    assert cli.main(["splitting", "--prime", "11"]) == 0
    assert cli.main(["asd", "--prime", "6"]) == 2
    assert cli.main(["qexp", "nosuchform"]) == 2


def test_cli_isogeny_verify(capsys):
    assert cli.main(["isogeny-verify"]) == 0
    captured = capsys.readouterr()
    assert captured.err.count("PASS") == 4
    doc = json.loads(captured.out)
    assert doc["pass"] is True


def test_golden_table_is_consistent():
    # the embedded factorization data re-expands to the embedded quartic
    from qmfrob.congruence import CharPoly4
    from qmfrob.qmfactor import QuadFactorization, splitting_set

    for p, row in GOLDEN_TABLE.items():
        H = CharPoly4(p, *row["c"]).validate()
        u = splitting_set(p)[-1] if row["kind"] != "squared" else splitting_set(p)[0]
        fact = QuadFactorization(p, u, row["kind"], golden_A(p), row["B"])
        assert fact.expand().coefficients() == row["c"]


def test_cmd_asd_includes_old_form_failures():
    rep = cmd_asd(5, nmax=20)
    assert rep.passed
    scholl = {entry["form"]: entry["pass"] for entry in rep.results["scholl"]}
    assert scholl["F1"] and scholl["F5"]
    assert not scholl["F2"] and not scholl["F3"] and not scholl["F4"]


def test_cmd_norms_passes():
    rep = cmd_norms()
    assert rep.passed
    assert rep.parameters["offset_shift"] == -1
    assert all(row["equal"] for row in rep.results)
