import json

import pytest

from quantized_nbhd.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def offsets(report, name):
    return report["schemes"][name]["sites"]["0"]["offsets"]


def test_zoo_then_analyze(tmp_path, capsys):
    path = tmp_path / "j2.json"
    assert run(capsys, "zoo", "jk", "--k", 2, "--ring", 8, "-o", path)[0] == 0
    code, out, _ = run(capsys, "analyze", path)
    assert code == 0
    report = json.loads(out)
    assert offsets(report, "in_f") == [0, 1]
    assert offsets(report, "in_f_inv") == [-2, -1]
    assert offsets(report, "quantum") == [0, 2]


def test_reports_are_reproducible(tmp_path, capsys):
    path = tmp_path / "jt.json"
    run(capsys, "zoo", "jt", "--k", 2, "--l", 1, "-o", path)
    first = run(capsys, "analyze", path)[1]
    again = tmp_path / "jt2.json"
    again.write_text(path.read_text())
    assert run(capsys, "analyze", again)[1].replace(str(again), str(path)) == first


def test_identity_map_analysis(tmp_path, capsys):
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"kind": "explicit", "domain": [["a", 2], ["b", 3]],
                                "codomain": [["a", 2], ["b", 3]], "table": list(range(6))}))
    report = json.loads(run(capsys, "analyze", path)[1])
    for scheme in report["schemes"].values():
        assert scheme["sites"]["a"]["members"] == ["a"]
        assert scheme["sites"]["b"]["members"] == ["b"]


def test_bounds_duality_compose(tmp_path, capsys):
    path = tmp_path / "t.json"
    run(capsys, "zoo", "toffoli", "--ring", 6, "-o", path)
    code, out, _ = run(capsys, "bounds", path)
    assert code == 0 and json.loads(out)["bounds"]["ok"]
    code, out, _ = run(capsys, "duality", path, "--pretty")
    assert code == 0 and out.strip().endswith("True")
    composite = tmp_path / "tt.json"
    code, out, _ = run(capsys, "compose", path, path, "--emit", composite)
    assert code == 0 and json.loads(out)["ok"]
    assert json.loads(composite.read_text())["kind"] == "explicit"


def test_signal(capsys):
    code, out, _ = run(capsys, "signal", "jk", "--k", 2, "--ring", 6)
    report = json.loads(out)
    assert code == 0 and report["distinguishable"] and not report["classical_possible"]
    code, _, err = run(capsys, "signal", "toffoli", "--ring", 6, "--alice", 2, "--bob", 0)
    assert code == 2 and "no input pair" in err


def test_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "analyze", bad)
    assert code == 2 and "line 1" in err
    assert run(capsys, "zoo", "jt", "--k", 2)[0] == 2
    assert run(capsys, "zoo", "toffoli", "--k", 2)[0] == 2
    with pytest.raises(SystemExit):
        main(["zoo", "nonsense"])


def test_verify_suite_subset(capsys):
    code, out, _ = run(capsys, "verify-suite", "--criterion", 1, "--criterion", 8, "--pretty")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_verify_suite_exit_code_follows_verdicts(capsys):
    code, out, _ = run(capsys, "verify-suite", "--criterion", 2)
    report = json.loads(out)
    assert code == (0 if report["ok"] else 1)
    assert report["seed"] == 7
