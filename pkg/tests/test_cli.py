import json

import pytest

from dolbeault_deform.cli import ORDER_ENV, main
from dolbeault_deform.models import builtin, model_to_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mc_json(capsys):
    code, out, _ = run(capsys, "mc", "--model", "iwasawa")
    assert code == 0
    rep = json.loads(out)
    assert rep["command"] == ["mc", "--model", "iwasawa"]
    assert rep["results"]["residual_zero"] and rep["results"]["matches_model_beltrami"]
    assert rep["caveats"] == [] and rep["order"] == 10
    assert len(rep["model"]["digest"]) == 16


def test_byte_identical_output(capsys):
    outs = [run(capsys, "mc", "--model", "iwasawa")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_validate_builtin_and_file(capsys, tmp_path):
    assert run(capsys, "validate", "iwasawa")[0] == 0
    bad = {"name": "bad", "dim": 3, "d": {"f1": [{"coeff": "1", "wedge": ["f2", "f3"]}],
                                          "f2": [{"coeff": "1", "wedge": ["f1", "f2"]}]}}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, out, err = run(capsys, "validate", str(p))
    assert code == 2
    assert json.loads(out)["results"]["valid"] is False
    assert json.loads(err)["exit_code"] == 2


def test_model_errors_exit_2(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    code, _, err = run(capsys, "mc", "--model", str(p))
    assert code == 2 and json.loads(err)["error"] == "invalid-model"
    assert run(capsys, "mc", "--model", "no-such-model")[0] == 2


@pytest.mark.parametrize("argv", [
    [], ["mc"], ["frobnicate"], ["mc", "--model", "iwasawa", "--order", "0"],
    ["deform", "--model", "iwasawa", "--bundle", "Q", "--q", "0", "--class", "f1"],
    ["deform", "--model", "iwasawa", "--bundle", "O^1", "--q", "1", "--class", "f1"],
    ["cohomology", "--model", "iwasawa", "--bundle", "O^1", "--q", "9"],
    ["cohomology", "--model", "iwasawa", "--bundle", "O^1", "--q", "1", "--at", "zz=1"],
    ["mc", "--model", "iwasawa", "--format", "xml"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "usage"


def test_refusals_exit_3(capsys):
    code, _, err = run(capsys, "deform", "--model", "iwasawa", "--bundle", "O^2", "--q", "0",
                       "--class", "f2^f3", "--method", "kahler")
    assert code == 3 and json.loads(err)["error"] == "refused"
    assert run(capsys, "cohomology", "--model", "nakamura_iii_3b", "--bundle", "O^1", "--q",
               "0", "--crosscheck")[0] == 3
    assert run(capsys, "deform", "--model", "torus:2", "--bundle", "O^1", "--q", "0",
               "--class", "f1", "--method", "cy")[0] == 3


def test_deform_unobstructed_constant(capsys):
    code, out, _ = run(capsys, "deform", "--model", "iwasawa", "--bundle", "O^1", "--q", "1",
                       "--class", "f1^fb1")
    res = json.loads(out)["results"]
    assert code == 0 and res["unobstructed"] and list(res["series"]) == ["0"]


def test_deform_obstructed_generators(capsys):
    _, out, _ = run(capsys, "deform", "--model", "iwasawa", "--bundle", "O^2", "--q", "0",
                    "--class", "f2^f3")
    assert json.loads(out)["results"]["bv_generators"] == ["-t21", "-t22"]


def test_jump_preset_table(capsys):
    code, out, _ = run(capsys, "jump", "--model", "iwasawa", "--bundle", "O^2", "--q", "0",
                       "--preset", "paper-strata")
    rows = json.loads(out)["results"]["rows"]
    assert code == 0 and [r["h"] for r in rows] == [3, 2, 1]


def test_jump_explicit_points_csv(capsys):
    code, out, _ = run(capsys, "jump", "--model", "iwasawa", "--bundle", "O^2", "--q", "0",
                       "--at", "0", "--at", "t11=1/2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("point,dim_V_t")
    assert lines[2].startswith("t11=1/2,2,")


def test_cohomology_md_and_crosscheck(capsys):
    code, out, _ = run(capsys, "cohomology", "--model", "iwasawa", "--bundle", "O^2", "--q",
                       "0", "--at", "t11=1/2,t22=1/2", "--crosscheck", "--format", "md")
    assert code == 0
    assert out.startswith("| point | dim |")
    assert "| t11=1/2,t22=1/2 | 1 | 3 | 1 | true |" in out
    assert out.rstrip().endswith("caveats: none")


def test_cohomology_obstructed_point_refused(capsys, tmp_path):
    data = model_to_dict(builtin("nakamura_iii_3b"))
    del data["beltrami"]
    p = tmp_path / "nak.json"
    p.write_text(json.dumps(data))
    code, _, err = run(capsys, "cohomology", "--model", str(p), "--bundle", "O^1", "--q",
                       "0", "--at", "t11=1/2,t12=1/2")
    assert code == 3 and json.loads(err)["error"] == "refused"
    assert run(capsys, "cohomology", "--model", str(p), "--bundle", "O^1", "--q", "0")[0] == 0


def test_nakamura_caveat(capsys):
    _, out, _ = run(capsys, "cohomology", "--model", "nakamura_iii_3b", "--bundle", "O^1",
                    "--q", "0")
    assert "asserted-MC" in json.loads(out)["caveats"]


def test_identities_command(capsys):
    code, out, _ = run(capsys, "identities", "--model", "torus:2", "--seed", "7",
                       "--cases", "5")
    assert code == 0 and json.loads(out)["results"]["all_passed"]


def test_order_env(capsys, monkeypatch):
    monkeypatch.setenv(ORDER_ENV, "4")
    assert json.loads(run(capsys, "mc", "--model", "torus:2")[1])["order"] == 4
    assert json.loads(run(capsys, "mc", "--model", "torus:2", "--order", "6")[1])["order"] == 6
    monkeypatch.setenv(ORDER_ENV, "zero")
    assert run(capsys, "mc", "--model", "torus:2")[0] == 1


def test_model_file_digest_matches_builtin(capsys, tmp_path):
    p = tmp_path / "iw.json"
    p.write_text(json.dumps(model_to_dict(builtin("iwasawa"))))
    a = json.loads(run(capsys, "mc", "--model", str(p))[1])["model"]["digest"]
    b = json.loads(run(capsys, "mc", "--model", "iwasawa")[1])["model"]["digest"]
    assert a == b
