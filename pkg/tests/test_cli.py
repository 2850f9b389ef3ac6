import hashlib
import json

import pytest

from cwlab import fixtures
from cwlab.cli import main


def fx(name):
    return str(fixtures.path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_valid(capsys):
    code, out, _ = run(capsys, "verify", fx("a_4_10"), "--coins", "10", "--mode", "fc")
    assert code == 0 and out.startswith("valid")


def test_verify_pseudo_modes(capsys):
    code, out, _ = run(capsys, "verify", fx("pseudo_4_11"), "--coins", "11", "--mode", "fc")
    assert code == 1 and "invalid" in out
    code, _, _ = run(capsys, "verify", fx("pseudo_4_11"), "--coins", "11", "--mode", "pseudo")
    assert code == 0


def test_verify_ff(capsys):
    assert run(capsys, "verify", fx("c_5_20"), "--coins", "20", "--mode", "ff")[0] == 0


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "nope.txt"), "--coins", "3")
    assert code == 2 and "nope.txt" in err


def test_parse_error_is_positioned(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("0. 1 v 2 : => 1, => 2.\n")
    code, _, err = run(capsys, "verify", str(p), "--coins", "2")
    assert code == 2 and f"{p}:1:" in err


def test_coin_count_mismatch(capsys):
    assert run(capsys, "verify", fx("inline_2_3"), "--coins", "2")[0] == 2


def test_inferred_coins_warn(capsys):
    code, _, err = run(capsys, "verify", fx("inline_2_3"))
    assert code == 0 and "warning" in err and "3" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "search", "--coins", "3")[0] == 2


def test_json_report(capsys):
    code, out, _ = run(capsys, "verify", fx("inline_2_4"), "--coins", "4", "--format", "json")
    doc = json.loads(out)
    digest = hashlib.sha256(fixtures.path("inline_2_4").read_bytes()).hexdigest()
    assert code == 0
    assert doc["schema_version"] == "cwlab-cli/1"
    assert doc["input_digest"] == "sha256:" + digest
    assert doc["report"]["valid"] is True
    # reproducible logs: no timing fields
    assert "elapsed" not in out


def test_verify_accepts_interchange(capsys, tmp_path):
    code, out, _ = run(capsys, "expand", fx("inline_2_3"), "--coins", "3", "-o", str(tmp_path / "t"))
    assert code == 0 and out.startswith("Weighing 1:")
    assert (tmp_path / "t.txt").exists()
    assert run(capsys, "verify", str(tmp_path / "t.json"))[0] == 0


def test_scale(capsys, tmp_path):
    code, out, _ = run(capsys, "scale", fx("inline_2_3"), "--coins", "3", "--times", "1")
    assert code == 0 and out.rstrip().endswith("(4,9) valid")


def test_scale_not_scalable(capsys):
    code, out, _ = run(capsys, "scale", fx("inline_2_4"), "--coins", "4")
    assert code == 1 and "not scalable" in out
    code, out, _ = run(capsys, "scale", fx("inline_2_4"), "--coins", "4", "--allow-depth3")
    assert code == 0 and "(5,12) valid" in out


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--weighings", "2", "--coins", "5")
    assert code == 1 and "no solution" in out
    code, out, _ = run(capsys, "search", "--weighings", "2", "--coins", "4", "--format", "json")
    assert code == 0 and json.loads(out)["verdict"] == "found"


def test_search_budget(capsys):
    code, out, _ = run(capsys, "search", "--weighings", "4", "--coins", "11", "--budget-nodes", "5")
    assert code == 1 and "budget exceeded" in out


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--max-w", "10")
    assert code == 0
    itb_row = next(x for x in out.splitlines() if x.startswith("ITB"))
    assert itb_row.split()[-1] == "344"
    code, out, _ = run(capsys, "bounds", "--max-w", "3", "--max-n", "5", "--csv")
    assert code == 0 and out.startswith("w,found")


def test_compose(capsys):
    code, out, _ = run(capsys, "compose", "--coins", "13", "--group-size", "3")
    assert code == 0 and "valid fc-solution" in out
    assert run(capsys, "compose", "--coins", "5", "--group-size", "3")[0] == 2
