from __future__ import annotations

import json

import jsonschema
import pytest

from ladderlab import parse_word, run_verify
from ladderlab.cli import main
from ladderlab.report import (
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_RESOURCE,
    EXIT_VIOLATION,
    REPORT_SCHEMA,
)

from conftest import S3_DOC, Z2_DOC, Z3_DOC


@pytest.fixture(scope="module")
def spec_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("specs")
    paths = {}
    for name, doc in (("z2", Z2_DOC), ("z3", Z3_DOC), ("s3", S3_DOC)):
        p = root / f"{name}.json"
        p.write_text(json.dumps(doc), encoding="utf-8")
        paths[name] = str(p)
    return paths


def run(argv):
    return main(argv)


def test_cmd_reduce(spec_files, capsys):
    code = run(["reduce", "f0:1 f1:1 f1:1", "--groups", spec_files["z2"], spec_files["z2"]])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "f0:1"


def test_cmd_reduce_identity(spec_files, capsys):
    code = run(["reduce", "", "--groups", spec_files["z2"], spec_files["z2"]])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "ε"


def test_cmd_reduce_bad_factor(spec_files, capsys):
    code = run(["reduce", "f7:1", "--groups", spec_files["z2"], spec_files["z2"]])
    assert code == EXIT_PARSE
    assert "error" in capsys.readouterr().err


def test_cmd_ball(spec_files, capsys):
    code = run(
        ["ball", "--radius", "2", "--groups", spec_files["z2"], spec_files["z2"], "--json"]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 5


def test_cmd_ball_r0(spec_files, capsys):
    code = run(["ball", "--radius", "0", "--groups", spec_files["z2"], spec_files["z2"], "--json"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["count"] == 1


def test_cmd_ball_cap_exceeded(spec_files, capsys):
    code = run(
        ["ball", "--radius", "5", "--groups", spec_files["z3"], spec_files["z3"], "--cap", "10"]
    )
    assert code == EXIT_RESOURCE
    assert "cap" in capsys.readouterr().err


def test_cmd_index(spec_files, capsys):
    code = run(
        [
            "index",
            "--word",
            "x1 y1^-1",
            "--radius",
            "1",
            "--groups",
            spec_files["z2"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["index"] == 1
    assert doc["cutoff_hit"] is False


def test_cmd_index_empty_word(spec_files, capsys):
    code = run(
        [
            "index",
            "--word",
            "",
            "--radius",
            "1",
            "--groups",
            spec_files["z2"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["index"] == 1


def test_cmd_index_cutoff_hit(spec_files, capsys):
    code = run(
        [
            "index",
            "--word",
            "x1 y1",
            "--radius",
            "1",
            "--cutoff",
            "1",
            "--groups",
            spec_files["z2"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["cutoff_hit"] is True
    assert doc["index"] == 1


def test_cmd_index_factor_domain(spec_files, capsys):
    code = run(
        [
            "index",
            "--word",
            "x1 y1",
            "--factor",
            "0",
            "--groups",
            spec_files["z3"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["domain"] == "factor:0"
    assert doc["index"] == 1


def test_cmd_bound_empty_word(spec_files, capsys):
    code = run(
        ["bound", "--word", "", "--radius", "2", "--groups", spec_files["z2"], spec_files["z2"], "--json"]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["bound_text"] == "1"
    assert doc["ell"] == 0


def test_cmd_bound_structure(spec_files, capsys):
    code = run(
        ["bound", "--word", "x1 y1", "--radius", "1", "--groups", spec_files["z2"], spec_files["z2"], "--json"]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["ell"] == 4
    assert doc["format"] == "ladderlab-certificate@1"


def test_cmd_verify_verified(spec_files, capsys):
    code = run(
        [
            "verify",
            "--word",
            "x1 y1 x1^-1 y1^-1",
            "--radius",
            "1",
            "--cutoff",
            "8",
            "--groups",
            spec_files["z2"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "VERIFIED"
    jsonschema.validate(doc, REPORT_SCHEMA)


def test_cmd_verify_z3z2(spec_files, capsys):
    code = run(
        [
            "verify",
            "--word",
            "x1 y1",
            "--radius",
            "1",
            "--groups",
            spec_files["z3"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "VERIFIED"


def test_cmd_verify_forced_violation(spec_files, capsys):
    code = run(
        [
            "verify",
            "--word",
            "x1 y1",
            "--radius",
            "1",
            "--force-bound",
            "0",
            "--groups",
            spec_files["z2"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_VIOLATION
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "VIOLATION"


def test_cmd_verify_inconclusive(spec_files, capsys):
    # forcing the bound to a reachable value with an even smaller cutoff makes
    # the search stop at the cutoff with the question still open
    code = run(
        [
            "verify",
            "--word",
            "x1 y1",
            "--radius",
            "1",
            "--force-bound",
            "1",
            "--cutoff",
            "8",
            "--groups",
            spec_files["z2"],
            spec_files["z2"],
            "--json",
        ]
    )
    assert code == EXIT_INCONCLUSIVE
    assert json.loads(capsys.readouterr().out)["verdict"] == "CUTOFF_INCONCLUSIVE"


def test_cmd_verify_csv(spec_files, capsys):
    code = run(
        [
            "verify",
            "--word",
            "x1 y1",
            "--radius",
            "1",
            "--groups",
            spec_files["z2"],
            spec_files["z2"],
            "--csv",
        ]
    )
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("word,radius,groups,bound")
    assert len(lines) == 2


def test_cmd_verify_word_parse_error(spec_files, capsys):
    code = run(
        ["verify", "--word", "x0", "--radius", "1", "--groups", spec_files["z2"], spec_files["z2"]]
    )
    assert code == EXIT_PARSE


def test_cmd_ramsey(capsys):
    assert run(["ramsey", "--colors", "2", "--target", "3"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "6"
    assert run(["ramsey", "--colors", "16", "--target", "50"]) == EXIT_RESOURCE


def test_report_determinism(z2z3):
    w = parse_word("x1 y1")
    r1 = run_verify(z2z3, w, 1)
    r2 = run_verify(z2z3, w, 1)
    assert r1.config_digest == r2.config_digest
    assert r1.witness == r2.witness
    assert r1.bound == r2.bound
    assert r1.verdict == r2.verdict


def test_report_schema_on_inconclusive_and_violation(z2z2):
    w = parse_word("x1 y1")
    for forced in (0, 1):
        rep = run_verify(z2z2, w, 1, force_bound=forced)
        jsonschema.validate(rep.to_json(), REPORT_SCHEMA)


def test_verify_rejects_stub_context():
    from ladderlab import FreeProduct, InfiniteFactor

    stub = {"name": "stub", "kind": "infinite-stub", "supplied_indices": {}}
    context = FreeProduct.from_documents([Z2_DOC, stub])
    with pytest.raises(InfiniteFactor):
        run_verify(context, parse_word("x1 y1"), 1)


def test_cli_index_requires_exactly_one_domain(spec_files, capsys):
    with pytest.raises(SystemExit) as exc:
        run(["index", "--word", "x1", "--groups", spec_files["z2"], spec_files["z2"]])
    assert exc.value.code == 2


def test_cmd_verify_threads(spec_files, capsys):
    code = run(
        [
            "verify",
            "--word",
            "x1 y1 x1^-1 y1^-1",
            "--radius",
            "2",
            "--threads",
            "4",
            "--groups",
            spec_files["z2"],
            spec_files["z3"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    threaded = json.loads(capsys.readouterr().out)
    code = run(
        [
            "verify",
            "--word",
            "x1 y1 x1^-1 y1^-1",
            "--radius",
            "2",
            "--groups",
            spec_files["z2"],
            spec_files["z3"],
            "--json",
        ]
    )
    assert code == EXIT_OK
    sequential = json.loads(capsys.readouterr().out)
    assert threaded["observed_index"] == sequential["observed_index"]
    assert threaded["witness"] == sequential["witness"]
    assert threaded["verdict"] == sequential["verdict"]


def test_cmd_ramsey_json(capsys):
    assert run(["ramsey", "--colors", "3", "--target", "3", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "17"
