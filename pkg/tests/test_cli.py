import json
import subprocess
import sys
from pathlib import Path

import pytest

from torsionfree import certs
from torsionfree.cases import CaseError, load_case, parse_case_text, serialize, shipped_case_paths
from torsionfree.cli import main, run_case

FIXTURES = Path(__file__).parent / "fixtures"


def test_validate_shipped(capsys):
    names = [Path(p).stem for p in shipped_case_paths()]
    assert main(["validate", *names]) == 0
    out = capsys.readouterr().out
    assert out.count("ok ") == len(names)


def test_run_dual_numbers_writes_reports(tmp_path, capsys):
    assert main(["run", "dual_numbers", "--out", str(tmp_path), "--no-timing"]) == 0
    report = json.loads((tmp_path / "dual_numbers.report.json").read_text())
    assert "millis" not in json.dumps(report)
    assert (tmp_path / "dual_numbers.summary.txt").read_text().startswith("case dual_numbers")
    assert main(["replay", str(tmp_path / "dual_numbers.report.json")]) == 0
    assert "replay ok" in capsys.readouterr().out


def test_false_expectation_exits_1(tmp_path):
    assert main(["run", str(FIXTURES / "false_expectation.json"), "--out", str(tmp_path)]) == 1


def test_malformed_exits_2_with_location(capsys):
    assert main(["validate", str(FIXTURES / "malformed.json")]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "column" in err


def test_usage_errors_exit_2():
    assert main([]) == 2
    assert main(["run", "no_such_case_file"]) == 2
    assert main(["catalog", "no_such_ring"]) == 2


def test_catalog_command(tmp_path, capsys):
    out = tmp_path / "cat.json"
    assert main(["catalog", "f2_dual_numbers", "--cap", "2", "--out", str(out)]) == 0
    assert "3 classes" in capsys.readouterr().out
    assert json.loads(out.read_text())["classes"] == 3
    assert main(["catalog", "f2_x2_y2", "--cap", "4", "--budget", "5"]) == 1


def test_replay_detects_tampering(tmp_path):
    assert main(["run", "integers", "--out", str(tmp_path)]) == 0
    path = tmp_path / "integers.report.json"
    report = json.loads(path.read_text())
    report["checks"][0]["summary"]["tampered"] = True
    path.write_text(json.dumps(report))
    assert main(["replay", str(path)]) == 1


def test_strict_hypotheses_turns_skips_into_failures(tmp_path):
    case = {"objects": {"R": {"kind": "algebra", "construct": "named", "name": "f2_rad_square_zero"}},
            "checks": [{"check": "lemma_3_5", "args": {"ring": "R", "n": 1}, "cap": 3}]}
    path = tmp_path / "skip.json"
    path.write_text(json.dumps(case))
    assert main(["run", str(path), "--out", str(tmp_path)]) == 0
    assert main(["run", str(path), "--out", str(tmp_path), "--strict-hypotheses"]) == 1


@pytest.mark.parametrize("path", shipped_case_paths())
def test_serialize_roundtrip(path):
    case = load_case(path)
    text = serialize(case)
    again = parse_case_text(text)
    assert serialize(again) == text
    assert again.object_digests() == case.object_digests()


def test_case_errors():
    with pytest.raises(CaseError, match="unresolved reference"):
        parse_case_text(json.dumps({"objects": {"M": {"kind": "module", "construct": "regular",
                                                      "algebra": "missing"}}, "checks": []}))
    with pytest.raises(CaseError, match="cyclic"):
        parse_case_text(json.dumps({"objects": {"a": {"kind": "algebra", "construct": "opposite", "of": "b"},
                                                "b": {"kind": "algebra", "construct": "opposite", "of": "a"}},
                                    "checks": []}))
    with pytest.raises(CaseError, match="unknown check"):
        parse_case_text(json.dumps({"objects": {}, "checks": [{"check": "nope"}]}))
    with pytest.raises(CaseError, match="digest mismatch"):
        parse_case_text(json.dumps({"objects": {"k": {"kind": "algebra", "construct": "ground_field", "p": 2,
                                                      "digest": "0" * 64}}, "checks": []}))


def test_parallel_jobs_match_serial():
    path = next(p for p in shipped_case_paths() if p.endswith("dual_numbers.json"))
    assert certs.strip_timing(run_case(path)) == certs.strip_timing(run_case(path, jobs=2))


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torsionfree.cli", "catalog", "f2", "--cap", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "f2:" in proc.stdout
