import json
import subprocess
import sys

import pytest

from asanuma.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "asanuma.json").write_text(json.dumps({"asanuma": {"p": 2, "m": 1, "e": 2, "s": 3}}))
    (tmp_path / "asanuma2.json").write_text(json.dumps({"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}}))
    (tmp_path / "phi1.json").write_text(json.dumps({"family": "phi1", "parameter": "1"}))
    (tmp_path / "prop.json").write_text(json.dumps({"x": 0, "z": 3, "t": 2, "derive_y": True}))
    return tmp_path


def test_check_exp_verified(capsys, files):
    code, rep = call(capsys, "check-exp", "--algebra", str(files / "asanuma.json"), "--map", str(files / "phi1.json"))
    assert code == 0 and rep["outcome"]["status"] == "verified"
    assert rep["schema"] == 1 and set(rep["inputs"]) == {"--algebra", "--map"}


def test_check_exp_refuted(capsys, files):
    code, rep = call(capsys, "check-exp", "--algebra", str(files / "asanuma2.json"), "--map", '{"images": {"t": "t + U"}}')
    assert code == 1 and rep["outcome"]["failing_axiom"] == "relation"


def test_gr_relation(capsys, files):
    code, rep = call(capsys, "gr", "--algebra", str(files / "asanuma2.json"), "--weights", str(files / "prop.json"))
    assert code == 0 and rep["outcome"]["relation"] == "x^2*y + z^4 + t^6"


def test_count_points(capsys):
    code, rep = call(capsys, "count-points", "--asanuma", "p=2,m=2,e=2,s=3", "--q", "2")
    assert code == 0 and rep["outcome"]["count"] == 8


def test_count_points_batch(capsys, tmp_path):
    batch = tmp_path / "batch.json"
    batch.write_text(json.dumps([{"asanuma": "p=2,m=2,e=2,s=3", "q": 4}, {"asanuma": "p=3,m=2,e=2,s=2", "q": 3}]))
    code, rep = call(capsys, "count-points", "--batch", str(batch))
    assert code == 0 and [r["count"] for r in rep["outcome"]["results"]] == [64, 27]


def test_other_commands(capsys):
    A = ["--asanuma", "p=2,m=2,e=2,s=3"]
    code, rep = call(capsys, "invariants", *A, "--map", '{"family": "phi3"}', "--degree-bound", "2")
    assert code == 0 and rep["outcome"]["y_free"]
    code, rep = call(capsys, "induce-gr", *A, "--map", '{"family": "phi3"}', "--weights", "second", "--degree-bound", "4")
    assert code == 0 and rep["outcome"]["shift"] == -2 and rep["outcome"]["containment"]["passed"]
    code, rep = call(capsys, "lead", *A, "--weights", "second", "--element", "z^4 + t")
    assert rep["outcome"]["lead"] == "z^4"
    code, rep = call(capsys, "degree", *A, "--weights", "second", "--element", "x^2*y")
    assert rep["outcome"]["degree"] == 12
    code, rep = call(capsys, "normalize", *A, "--element", "x^2*y + z^4 + t^6")
    assert rep["outcome"]["normal_form"] == "t"
    code, rep = call(capsys, "search", "--algebra", "graded:p=2,m=2,e=2,s=3", "--invariant", "y")
    assert code == 0 and rep["outcome"]["count"] == 0
    code, rep = call(capsys, "derksen", "--translations", "3", "--degree-bound", "2")
    assert rep["outcome"]["full"]
    code, rep = call(capsys, "derksen", *A, "--map", '{"family": "phi3"}', "--map", '{"family": "phi4"}', "--degree-bound", "4")
    assert rep["outcome"]["witnesses"]["y"] is False
    code, rep = call(capsys, "singular", "--poly", "z^2 + t^3 + 1", "--p", "2", "--point", "z=1,t=0")
    assert code == 0 and rep["outcome"]["verdict"] == "singular"
    code, rep = call(capsys, "singular", "--poly", "z^2 + t^3 + 1", "--q", "4", "--point", "z=1,t=0")
    assert code == 0
    code, rep = call(capsys, "smooth", *A)
    assert code == 0 and rep["outcome"]["derivative"] == "1"
    code, rep = call(capsys, "smooth", "--algebra", "graded:p=2,m=2,e=2,s=3")
    assert code == 1
    iso = ["--source", '{"p": 3, "generators": ["X", "Y"]}', "--target", '{"p": 3, "generators": ["X", "Y"]}']
    code, rep = call(capsys, "verify-iso", *iso, "--forward", '{"X": "X + Y^2"}', "--backward", '{"X": "X - Y^2"}')
    assert code == 0
    code, rep = call(capsys, "verify-iso", *iso, "--forward", '{"X": "X + Y^2"}', "--backward", '{"X": "X + Y^2"}')
    assert code == 1


def test_usage_errors(capsys):
    code, rep = call(capsys, "count-points", "--asanuma", "p=2,m=2", "--q", "2")
    assert code == 2 and "--asanuma" in rep["outcome"]["message"] and "p=<prime>" in rep["outcome"]["message"]
    code, rep = call(capsys, "gr", "--algebra", "{oops", "--weights", "first")
    assert code == 2 and "--algebra" in rep["outcome"]["message"]
    code, rep = call(capsys, "normalize", "--asanuma", "p=2,m=2,e=2,s=3", "--element", "x +* y")
    assert code == 2 and rep["outcome"]["error"] == "PolySyntaxError"
    code, rep = call(capsys, "count-points", "--asanuma", "p=2,m=2,e=2,s=2", "--q", "2")
    assert code == 2 and rep["outcome"]["error"] == "InvalidParameters"
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2


def test_selftest_passes_and_is_deterministic(capsys):
    code1, rep1 = call(capsys, "selftest")
    code2, rep2 = call(capsys, "selftest")
    assert code1 == code2 == 0
    assert json.dumps(rep1["outcome"], sort_keys=True) == json.dumps(rep2["outcome"], sort_keys=True)
    assert all(v == "pass" for v in rep1["outcome"]["matrix"].values())
    control = next(c for c in rep1["outcome"]["criteria"] if c["id"] == "control")
    assert control["detail"]["failing_axiom"] == "relation"


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "asanuma", "count-points", "--asanuma", "p=2,m=2,e=2,s=3", "--q", "2"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["outcome"]["count"] == 8
