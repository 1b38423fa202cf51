import json

import pytest

from coverlaw.cli import run, trial_seed


def records(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def strip_timing(recs):
    return [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in recs]


def test_check_lattice_boolean(tmp_path):
    out = tmp_path / "r.jsonl"
    assert run(["check-lattice", "boolean3", "-o", str(out)]) == 0
    recs = records(out)
    assert recs[-1]["summary"] and recs[-1]["pass"]
    for r in recs[:-1]:
        assert {"property", "pass", "max_deviation", "elapsed_ms"} <= set(r)


def test_check_lattice_broken(tmp_path):
    out = tmp_path / "r.jsonl"
    assert run(["check-lattice", "benzene_broken_ortho", "-o", str(out)]) == 1
    bad = [r for r in records(out) if not r["pass"] and not r.get("summary")]
    assert bad[0]["property"] == "orthomodular"
    assert len(bad[0]["counterexample"]) == 2


def test_malformed_input_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"n": 2,\n "covers": [[0, 1]]\n')
    assert run(["check-lattice", str(f)]) == 2
    assert "bad.json:3" in capsys.readouterr().err
    f.write_text('{"n": 2, "covers": [[0, 1]]}')
    assert run(["check-lattice", str(f)]) == 2
    assert "ortho" in capsys.readouterr().err


def test_missing_file_exit_2():
    assert run(["check-lattice", "does-not-exist.json"]) == 2


def test_covering_counterexample_exit_1(tmp_path):
    assert run(["check-covering", "pasted_counterexample_2", "--dims",
                "-o", str(tmp_path / "r")]) == 1


def test_tolerance_override_recorded(tmp_path):
    out = tmp_path / "r.jsonl"
    assert run(["epr-demo", "--trials", "5", "--tol-num", "1e-7", "-o", str(out)]) == 0
    summary = records(out)[-1]
    assert summary["tolerances"]["num"] == 1e-7
    assert summary["seed"] == 0 and summary["trials"] == 5


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("COVERLAW_SEED", "41")
    out = tmp_path / "r.jsonl"
    run(["construct-psi-prime", "--trials", "3", "-o", str(out)])
    assert records(out)[-1]["seed"] == 41


@pytest.mark.parametrize("argv", [
    ["verify-theorem", "--dim", "4", "--trials", "10"],
    ["frame-consistency", "--trials", "3", "--geometry-trials", "6"],
    ["verify-ep", "--trials", "4"],
])
def test_deterministic_reports(tmp_path, argv):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert run(argv + ["--seed", "9", "-o", str(a)]) == 0
    assert run(argv + ["--seed", "9", "-o", str(b)]) == 0
    assert run(argv + ["--seed", "9", "--jobs", "3", "-o", str(c)]) == 0
    assert strip_timing(records(a)) == strip_timing(records(b)) == strip_timing(records(c))


def test_trial_seed_distinct():
    assert len({trial_seed(0, k) for k in range(100)}) == 100
    assert trial_seed(1, 0) != trial_seed(0, 0)


def test_bad_subcommand():
    with pytest.raises(SystemExit) as exc:
        run(["bogus"])
    assert exc.value.code == 2
