import json
import logging

import pytest

from mlcif.app import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, infer_k, main
from mlcif.poset import ZSet

Z = ZSet.of


@pytest.fixture(autouse=True)
def _reset_cli_logging():
    yield
    logger = logging.getLogger("mlcif")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_infer_k():
    assert infer_k([]) == 2
    assert infer_k([Z(2, 3)]) == 2
    assert infer_k([Z(2, 3), Z(2, 4, 5)]) == 3


# ---- check-pgs ---------------------------------------------------------------


def test_check_pgs_valid(capsys):
    code, out, _ = run(capsys, "check-pgs", "2,3", "--k", "3")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "valid"


def test_check_pgs_cross_pair_fails(capsys):
    code, out, _ = run(capsys, "check-pgs", "2,3;2,4,5")
    assert code == EXIT_DOMAIN
    assert "disjoint witness ({1,3}, {2,4,5})" in out
    assert out.splitlines()[-1] == "invalid"


def test_check_pgs_self_si_fails(capsys):
    code, out, _ = run(capsys, "check-pgs", "2,4")
    assert code == EXIT_DOMAIN
    assert "2,4 fails self strong intersection" in out


def test_check_pgs_parse_error(capsys):
    code, _, err = run(capsys, "check-pgs", "2,x")
    assert code == EXIT_USAGE
    assert "error:" in err


def test_check_pgs_json_and_file(capsys, tmp_path):
    path = tmp_path / "pgs.txt"
    path.write_text("2,3,4\n")
    code, out, _ = run(capsys, "check-pgs", "--file", str(path), "--k", "3", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["valid"] is True
    assert doc["pgs"] == [[2, 3, 4]]
    assert doc["pairs"][0]["ell"] == 3


# ---- build -------------------------------------------------------------------


def test_build_a23(capsys):
    code, out, _ = run(capsys, "build", "--n", "4", "--k", "2", "--pgs", "2,3")
    assert code == EXIT_OK
    assert out.startswith("n=4 k=2\n1,2\n1,3\n2,3\n")
    assert "form: a23" in out


def test_build_hilton_milner_verifies(capsys):
    code, out, _ = run(capsys, "build", "--n", "8", "--k", "3", "--pgs", "2,3,4", "--verify")
    assert code == EXIT_OK
    assert "# verify: maximal left-compressed intersecting family" in out
    assert "# hgens: 1,4" in out


def test_build_star_json(capsys):
    code, out, _ = run(capsys, "--json", "build", "--n", "8", "--k", "3", "--pgs", "")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["size"] == "21"
    assert doc["profile"]["recognized_form"] == "star"
    assert len(doc["members"]) == 21


def test_build_named_ahm(capsys):
    code, out, _ = run(capsys, "build", "--n", "8", "--k", "4", "--named", "ahm", "--b", "4", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["pgs"] == [[2, 3, 4]]
    assert doc["profile"]["recognized_form"] == "ahm(4)"


def test_build_flags_the_two_maxgen_shape_violation(capsys):
    code, out, _ = run(capsys, "build", "--pgs", "2,4,5", "--n", "6", "--k", "3", "--verify")
    assert code == EXIT_DOMAIN
    assert "# verify: maximal left-compressed intersecting family" in out
    assert "# theorem violation: maximal generators 1,2;2,4,5" in out


def test_build_invalid_pgs(capsys):
    code, _, err = run(capsys, "build", "--pgs", "2,4", "--n", "6", "--k", "3")
    assert code == EXIT_DOMAIN
    assert "violation: not self strongly intersecting" in err


def test_build_named_ahm_needs_b(capsys):
    code, _, err = run(capsys, "build", "--n", "8", "--k", "3", "--named", "ahm")
    assert code == EXIT_USAGE
    assert "4 <= b <= k+1" in err


def test_build_below_2k_is_usage_error(capsys):
    code, _, err = run(capsys, "build", "--n", "3", "--k", "2", "--pgs", "")
    assert code == EXIT_USAGE
    assert "error:" in err


# ---- recover -----------------------------------------------------------------


def test_build_then_recover(capsys, tmp_path):
    path = tmp_path / "hm.txt"
    code, out, _ = run(capsys, "-q", "build", "--n", "8", "--k", "3", "--pgs", "2,3,4", "--output", str(path))
    assert code == EXIT_OK
    assert path.read_text().startswith("n=8 k=3\n")
    code, out, _ = run(capsys, "recover", str(path))
    assert code == EXIT_OK
    assert "pgs: 2,3,4" in out
    assert "hgens: 1,4" in out
    assert "form: hilton_milner" in out


def test_recover_rejects_non_mlcif(capsys, tmp_path):
    path = tmp_path / "small.txt"
    path.write_text("n=4 k=2\n1,2\n1,3\n")
    code, out, _ = run(capsys, "recover", str(path))
    assert code == EXIT_DOMAIN
    assert "not an MLCIF: not maximal: witness {1,4}" in out
    code, out, _ = run(capsys, "recover", str(path), "--json")
    assert json.loads(out) == {"ok": False, "reason": "not maximal", "witness": [[1, 4]]}


def test_recover_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "recover", str(tmp_path / "missing.txt"))
    assert code == EXIT_USAGE


# ---- enumerate ---------------------------------------------------------------


def test_enumerate_k2_to_stdout(capsys):
    code, out, _ = run(capsys, "enumerate", "--k", "2")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert [r["recognized_form"] for r in doc["records"]] == ["star", "a23"]
    assert doc["records"][0]["size_at"] == {"4": "3"}


def test_enumerate_is_byte_identical(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["enumerate", "--k", "3", "--n", "6", "7", "--output", str(first)]) == EXIT_OK
    assert main(["enumerate", "--k", "3", "--n", "7", "6", "--output", str(second)]) == EXIT_OK
    out, _ = capsys.readouterr()
    assert "k=3: 6 records" in out
    assert first.read_bytes() == second.read_bytes()
    assert len(json.loads(first.read_text())["records"]) == 6


def test_enumerate_budget(capsys):
    code, _, err = run(capsys, "enumerate", "--k", "6")
    assert code == EXIT_DOMAIN
    assert "max_k" in err
    code, _, _ = run(capsys, "enumerate", "--k", "3", "--n", "5")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "--max-n", "6", "enumerate", "--k", "3", "--n", "7")
    assert code == EXIT_DOMAIN


def test_enumerate_time_budget_writes_nothing(capsys, tmp_path):
    out_path = tmp_path / "k4.json"
    code, out, err = run(capsys, "--time-budget", "0", "enumerate", "--k", "4", "--n", "8", "9", "10", "--output", str(out_path))
    assert code == EXIT_DOMAIN
    assert "time budget" in err
    assert not out_path.exists()
    assert out == ""


def test_enumerate_time_budget_covers_record_building(capsys, tmp_path, monkeypatch, catalog_k4):
    monkeypatch.setattr("mlcif.app.enumerate_pgs", lambda k, budget: [g.pgs for g in catalog_k4])
    out_path = tmp_path / "k4.json"
    code, _, err = run(capsys, "--time-budget", "0", "enumerate", "--k", "4", "--n", "8", "9", "--output", str(out_path))
    assert code == EXIT_DOMAIN
    assert "enumerate: time budget exhausted" in err
    assert not out_path.exists()


# ---- compare -----------------------------------------------------------------


@pytest.mark.parametrize("x, a_X, s_X, verdict", [
    ("5,6", 6, 15, "<"),
    ("2", 9, 8, ">"),
    ("2,3", 16, 15, ">"),
])
def test_compare_examples(capsys, x, a_X, s_X, verdict):
    code, out, _ = run(capsys, "compare", "--n", "10", "--k", "3", "--b", "4", x)
    assert code == EXIT_OK
    assert f"|A(X)|={a_X}" in out
    assert f"|S(X)|={s_X}" in out
    assert f"verdict: |A(X)| {verdict} |S(X)|" in out


def test_compare_json_with_oracle(capsys):
    code, out, _ = run(capsys, "compare", "--n", "10", "--k", "3", "--b", "4", "5,6", "--json", "--oracle")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert (doc["a_X"], doc["s_X"], doc["verdict"]) == ("6", "15", "<")
    assert doc["method"] == "enumeration"
    assert doc["case"] == 2


def test_compare_x_file_emits_json_lines(capsys, tmp_path):
    path = tmp_path / "xs.txt"
    path.write_text("2\n5,6\n")
    code, out, _ = run(capsys, "compare", "--n", "10", "--k", "3", "--b", "4", "--x-file", str(path))
    assert code == EXIT_OK
    lines = [json.loads(line) for line in out.splitlines()]
    assert [line["X"] for line in lines] == [[2], [5, 6]]
    assert [line["verdict"] for line in lines] == [">", "<"]


def test_compare_usage_errors(capsys):
    assert run(capsys, "compare", "--n", "10", "--k", "3", "--b", "4")[0] == EXIT_USAGE
    assert run(capsys, "compare", "--n", "10", "--k", "3", "--b", "4", "1,2")[0] == EXIT_USAGE
    assert run(capsys, "compare", "--n", "10", "--k", "3", "--b", "3", "2")[0] == EXIT_USAGE


# ---- selftest ----------------------------------------------------------------


def test_selftest_list(capsys):
    code, out, _ = run(capsys, "selftest", "--list")
    assert code == EXIT_OK
    assert "si_oracle" in out.split()
    assert "two_maxgen" in out.split()


def test_selftest_single_suite_json(capsys):
    code, out, _ = run(capsys, "selftest", "--suite", "closure_counts", "--suite", "bounds", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["passed"] is True
    assert [s["name"] for s in doc["suites"]] == ["closure_counts", "bounds"]


def test_selftest_two_maxgen_reports_failure(capsys):
    code, out, _ = run(capsys, "-q", "selftest", "--suite", "two_maxgen")
    assert code == EXIT_DOMAIN
    assert "FAILED" in out
    assert "{2,4,5}" in out


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == EXIT_USAGE
