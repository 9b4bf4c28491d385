import json
import subprocess
import sys

from liegen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_leading_term_text_and_json(capsys):
    assert run(capsys, "leading-term", "--family", "A", "--n", "2")[:2] == (0, "1/2\n")
    code, doc = as_json(capsys, "leading-term", "--family", "A", "--n", "2")
    assert code == 0 and doc["leading_term"] == "1/2"
    code, doc = as_json(capsys, "leading-term", "--family", "G2", "--p3")
    assert doc["leading_term"] == "1/9"


def test_json_is_stable(capsys):
    a = run(capsys, "sim", "--family", "SL", "--n", "4", "--format", "json")[1]
    b = run(capsys, "sim", "--family", "SL", "--n", "4", "--format", "json")[1]
    assert a == b
    assert json.loads(a)["pairs"][0] == ["4", "3,1"]


def test_weyl_classes_csv(capsys):
    code, out, _ = run(capsys, "weyl-classes", "--family", "D+", "--m", "4", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "class,probability,split"
    assert len(lines) == 12
    assert '"2-,2-",1/16,0' in lines


def test_verify_ab_alias_and_exit(capsys):
    code, doc = as_json(capsys, "verify-ab", "--family", "Sp", "--m", "4", "--q", "even")
    assert code == 0 and doc["empty"] is True
    assert all(s["count"] > 0 for s in doc["subset_residuals"] if len(s["subset"]) < len(doc["elements"]))


def test_pinv_class(capsys):
    code, doc = as_json(capsys, "pinv-leading", "--family", "G2", "--p3", "--class", "5")
    assert doc["pinv_leading"] == {"5": "1/4"}
    assert run(capsys, "pinv-leading", "--family", "A", "--n", "3", "--class", "7")[0] == 2


def test_g2_report(capsys):
    code, doc = as_json(capsys, "g2-report")
    assert doc["leading_term"] == "5/18"
    assert doc["shares_with_1_and_2"]["5"] is False


def test_sharpness_and_alpha_exit_codes(capsys):
    assert run(capsys, "sharpness", "--m", "3")[0] == 0
    assert run(capsys, "sharpness", "--m", "9")[0] == 2
    # equality also occurs outside W(D4), so the check reports failure
    assert run(capsys, "alpha-check", "--m-max", "6")[0] == 1


def test_usage_errors(capsys):
    assert run(capsys, "leading-term", "--family", "X", "--n", "3")[0] == 2
    assert run(capsys, "leading-term", "--family", "A", "--n", "99")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "mc-run", "--q", "9", "--samples", "10")[0] == 2


def test_mc_commands(capsys, tmp_path):
    out = tmp_path / "gl.json"
    code, _, _ = run(capsys, "mc-compare", "--group", "GL", "--n", "3", "--q", "2", "--exhaustive",
                     "--format", "json", "--out", str(out))
    doc = json.loads(out.read_text())
    # every exhaustive GL3(2) deviation stays below 1/q = 1/2, so nothing is flagged
    assert code == 0 and doc["counts"]["3"] == 48
    code, doc = as_json(capsys, "mc-run", "--group", "SL", "--n", "2", "--q", "11",
                        "--samples", "2000", "--seed", "3")
    assert code == 0 and doc["samples"] == 2000 and doc["seed"] == 3


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "liegen.cli", "leading-term", "--family", "A",
                           "--n", "3"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "4/9\n"
