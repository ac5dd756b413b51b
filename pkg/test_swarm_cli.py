import os
from types import SimpleNamespace

import pytest

from swarm_cli import UsageError, _exit_code, main, parse_seeds

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "scenarios")


@pytest.fixture(autouse=True)
def work_dir(tmp_path, monkeypatch):
    # logs/ и out/ создаются во временном каталоге
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_parse_seeds():
    assert parse_seeds("1..3") == [1, 2, 3]
    assert parse_seeds("7") == [7]
    with pytest.raises(UsageError):
        parse_seeds("5..1")
    with pytest.raises(UsageError):
        parse_seeds("a..b")


def test_exit_codes():
    ok = SimpleNamespace(status="SUCCESS")
    fail = SimpleNamespace(status="FAIL")
    timeout = SimpleNamespace(status="TIMEOUT")
    assert _exit_code([ok, ok]) == 0
    assert _exit_code([ok, timeout]) == 2
    assert _exit_code([ok, timeout, fail]) == 1


def test_run_writes_metrics(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code = main(["run", os.path.join(SCENARIO_DIR, "3x3.cfg"), "--seed", "1", "--out", str(out_dir)])
    assert code == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("seed=1 status=SUCCESS verify=PASS(")
    assert (out_dir / "metrics.csv").exists()
    assert (out_dir / "phases.csv").exists()


def test_run_with_frames(tmp_path):
    out_dir = tmp_path / "frames_run"
    code = main(["run", os.path.join(SCENARIO_DIR, "3x3.cfg"), "--frames-every", "20", "--out", str(out_dir)])
    assert code == 0
    frame = (out_dir / "frames" / "frame_00000.txt").read_text(encoding="utf-8")
    assert frame.startswith("t=20.000\n")
    assert (out_dir / "frames" / "frame_00000.ppm").exists()


def test_hex_run_verifies_groups(tmp_path, capsys):
    code = main(["run", os.path.join(SCENARIO_DIR, "hex_434.cfg"), "--out", str(tmp_path / "hex")])
    assert code == 0
    assert "verify=PASS(groups)" in capsys.readouterr().out


def test_batch_summary_and_excel(tmp_path, capsys):
    xlsx = tmp_path / "batch.xlsx"
    code = main([
        "batch", os.path.join(SCENARIO_DIR, "3x3.cfg"), "--seeds", "1..2", "--workers", "1",
        "--out", str(tmp_path / "batch"), "--xlsx", str(xlsx),
    ])
    assert code == 0
    assert "3x3: runs=2 success_rate=1.000" in capsys.readouterr().out
    assert xlsx.exists()
    with open(tmp_path / "batch" / "metrics.csv", encoding="utf-8") as f:
        assert len(f.read().splitlines()) == 3


def test_missing_scenario_is_usage_error(tmp_path):
    assert main(["run", str(tmp_path / "nope.cfg")]) == 64


def test_empty_seed_range_is_usage_error():
    assert main(["batch", os.path.join(SCENARIO_DIR, "3x3.cfg"), "--seeds", "9..3"]) == 64


def test_bad_scenario_is_usage_error(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("cols = 2\nrows = 5\n", encoding="utf-8")
    assert main(["run", str(bad)]) == 64


def test_unknown_option_exits_64():
    with pytest.raises(SystemExit) as exc:
        main(["run", "x.cfg", "--warp", "9"])
    assert exc.value.code == 64


def test_same_seed_writes_identical_files(tmp_path):
    scenario = os.path.join(SCENARIO_DIR, "5x5.cfg")
    for name in ("a", "b"):
        assert main(["run", scenario, "--seed", "3", "--drop", "0.05", "--out", str(tmp_path / name)]) in (0, 1, 2)
    for file_name in ("metrics.csv", "phases.csv"):
        assert (tmp_path / "a" / file_name).read_bytes() == (tmp_path / "b" / file_name).read_bytes()
