import csv

import openpyxl
import pytest

from kilobot_agent import Phase, R3_BASE
from metrics_export import (
    METRICS_HEADER,
    batch_summary,
    create_batch_excel,
    metrics_row,
    summary_line,
    write_metrics_csv,
    write_phases_csv,
)
from sim_engine import STATUS_FAIL, STATUS_SUCCESS, STATUS_TIMEOUT, RunResult


def make_result(seed, status, completion_s):
    return RunResult(
        seed=seed,
        status=status,
        completion_s=completion_s,
        phase_r1_s=80.0,
        phase_r2_s=None,
        origin_corner="top_left",
        symmetry="mirror_y" if status == STATUS_SUCCESS else "",
        msgs_sent=1000,
        msgs_dropped=100,
        phase_first_s={int(Phase.SR1A_P1): 0.0, R3_BASE: 150.0},
        phase_all_s={int(Phase.SR1A_P1): 0.0},
    )


RESULTS = [
    make_result(1, STATUS_SUCCESS, 150.0),
    make_result(2, STATUS_SUCCESS, 170.0),
    make_result(3, STATUS_FAIL, 160.0),
    make_result(4, STATUS_TIMEOUT, 900.0),
]


def test_metrics_row():
    assert metrics_row(RESULTS[0]) == [
        "1", "1", "150.000", "80.000", "", "top_left", "mirror_y", "1000", "100",
    ]


def test_write_metrics_csv(tmp_path):
    path = write_metrics_csv(str(tmp_path / "nested" / "metrics.csv"), RESULTS)
    with open(path, encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == METRICS_HEADER
    assert [row[1] for row in rows[1:]] == ["1", "1", "0", "0"]


def test_write_phases_csv(tmp_path):
    path = write_phases_csv(str(tmp_path / "phases.csv"), RESULTS[:1])
    with open(path, encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[1] == ["1", "SR1A_P1", "0.000", "0.000"]
    assert rows[2] == ["1", "R3_STEP(0)", "150.000", ""]


def test_batch_summary():
    summary = batch_summary(RESULTS)
    assert summary["runs"] == 4
    assert summary["success_rate"] == pytest.approx(0.5)
    assert summary["median_completion_s"] == pytest.approx(160.0)
    assert summary_line("25x8_noisy", RESULTS) == (
        "25x8_noisy: runs=4 success_rate=0.500 median_completion_s=160.000"
    )
    assert batch_summary([])["median_completion_s"] is None


def test_create_batch_excel(tmp_path):
    path = create_batch_excel(RESULTS, str(tmp_path / "batch.xlsx"), "25x8_noisy")
    wb = openpyxl.load_workbook(path)
    assert wb.sheetnames == ["Прогоны", "Сводка"]
    runs = wb["Прогоны"]
    assert runs.cell(row=1, column=1).value == "seed"
    assert runs.max_row == len(RESULTS) + 1
    assert wb["Сводка"].cell(row=2, column=2).value == 4
