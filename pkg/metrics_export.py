import csv
import logging
import os
import statistics

import openpyxl
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side

from action_plan import render_ascii, render_ppm
from kilobot_agent import phase_name

logger = logging.getLogger(__name__)

METRICS_HEADER = [
    "seed", "success", "completion_s", "phase_r1_s", "phase_r2_s",
    "origin_corner", "symmetry", "msgs_sent", "msgs_dropped",
]

PHASES_HEADER = ["seed", "phase", "first_entry_s", "all_entered_s"]


def _fmt_seconds(value):
    return "" if value is None else f"{value:.3f}"


def metrics_row(result):
    """Одна строка metrics.csv для результата прогона"""
    return [
        str(result.seed),
        "1" if result.success else "0",
        _fmt_seconds(result.completion_s),
        _fmt_seconds(result.phase_r1_s),
        _fmt_seconds(result.phase_r2_s),
        result.origin_corner,
        result.symmetry,
        str(result.msgs_sent),
        str(result.msgs_dropped),
    ]


def write_metrics_csv(path, results):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        for result in results:
            writer.writerow(metrics_row(result))
    return path


def write_phases_csv(path, results):
    """Время первого входа в каждую фазу (любым агентом и всеми агентами)"""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(PHASES_HEADER)
        for result in results:
            for phase, first in result.phase_first_s.items():
                writer.writerow([
                    result.seed,
                    phase_name(phase),
                    _fmt_seconds(first),
                    _fmt_seconds(result.phase_all_s.get(phase)),
                ])
    return path


def write_frames(out_dir, result):
    """Кадры прогона: frames/frame_NNNNN.txt и .ppm; возвращает число кадров"""
    if not result.frames:
        return 0
    frames_dir = os.path.join(out_dir, "frames")
    os.makedirs(frames_dir, exist_ok=True)
    for number, (time_s, roles) in enumerate(result.frames):
        base = os.path.join(frames_dir, f"frame_{number:05d}")
        with open(base + ".txt", "w", encoding="utf-8", newline="\n") as f:
            f.write(f"t={time_s:.3f}\n")
            f.write(render_ascii(roles, result.truth))
        with open(base + ".ppm", "wb") as f:
            f.write(render_ppm(roles, result.truth))
    return len(result.frames)


def batch_summary(results):
    """Доля успешных прогонов и медиана времени завершения успешных"""
    if not results:
        return {"runs": 0, "success_rate": 0.0, "median_completion_s": None}
    completed = [r.completion_s for r in results if r.success]
    return {
        "runs": len(results),
        "success_rate": sum(1 for r in results if r.success) / len(results),
        "median_completion_s": statistics.median(completed) if completed else None,
    }


def summary_line(scenario_name, results):
    summary = batch_summary(results)
    median = summary["median_completion_s"]
    median_text = "n/a" if median is None else f"{median:.3f}"
    return (f"{scenario_name}: runs={summary['runs']} success_rate={summary['success_rate']:.3f} "
            f"median_completion_s={median_text}")


def create_batch_excel(results, filepath, scenario_name=""):
    """
    Создаёт Excel файл с результатами серии прогонов

    Args:
        results (list): Список RunResult
        filepath (str): Куда сохранить .xlsx
        scenario_name (str): Имя сценария для листа сводки

    Returns:
        str: Путь к созданному файлу
    """
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = "Прогоны"

    headers = METRICS_HEADER + ["status", "groups", "skew_events", "details"]

    # Стили
    header_font = Font(bold=True, color="FFFFFF")
    header_fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
    center_align = Alignment(horizontal="center", vertical="center")
    border = Border(
        left=Side(style="thin"),
        right=Side(style="thin"),
        top=Side(style="thin"),
        bottom=Side(style="thin"),
    )

    for col_num, header in enumerate(headers, 1):
        cell = ws.cell(row=1, column=col_num, value=header)
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = center_align
        cell.border = border

    status_colors = {
        "SUCCESS": "EBF1DE",   # Зеленоватый
        "FAIL": "F2DCDB",      # Красноватый
        "TIMEOUT": "FDE9D9",
    }

    for row_num, result in enumerate(results, 2):
        row_data = [
            result.seed,
            1 if result.success else 0,
            round(result.completion_s, 3),
            None if result.phase_r1_s is None else round(result.phase_r1_s, 3),
            None if result.phase_r2_s is None else round(result.phase_r2_s, 3),
            result.origin_corner,
            result.symmetry,
            result.msgs_sent,
            result.msgs_dropped,
            result.status,
            "/".join(str(c) for c in result.group_counts),
            result.skew_events,
            result.verify_details,
        ]
        fill = PatternFill(start_color=status_colors.get(result.status, "FFFFFF"),
                           end_color=status_colors.get(result.status, "FFFFFF"), fill_type="solid")
        for col_num, value in enumerate(row_data, 1):
            cell = ws.cell(row=row_num, column=col_num, value=value)
            cell.border = border
            cell.alignment = center_align
            cell.fill = fill

    # Автоширина колонок
    for column_cells in ws.columns:
        length = max(len(str(cell.value or "")) for cell in column_cells)
        ws.column_dimensions[column_cells[0].column_letter].width = min(length + 2, 60)

    # Сводка
    summary = batch_summary(results)
    ws_summary = wb.create_sheet("Сводка")
    rows = [
        ("Сценарий", scenario_name),
        ("Прогонов", summary["runs"]),
        ("Доля успешных", round(summary["success_rate"], 3)),
        ("Медиана завершения, с", None if summary["median_completion_s"] is None
         else round(summary["median_completion_s"], 3)),
    ]
    for row_num, (label, value) in enumerate(rows, 1):
        ws_summary.cell(row=row_num, column=1, value=label).font = Font(bold=True)
        ws_summary.cell(row=row_num, column=2, value=value)
    ws_summary.column_dimensions["A"].width = 26

    os.makedirs(os.path.dirname(os.path.abspath(filepath)), exist_ok=True)
    wb.save(filepath)
    logger.info(f"Сводка серии сохранена в {filepath}")
    return filepath
