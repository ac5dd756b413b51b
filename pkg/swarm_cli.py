"""
Точка входа симулятора роя.

    python swarm_cli.py run scenarios/5x5.cfg --seed 1
    python swarm_cli.py batch scenarios/25x8_noisy.cfg --seeds 1..50 --workers 4 --xlsx out/batch.xlsx
    python swarm_cli.py verify
"""
import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from config import BATCH_SETTINGS, EXIT_CODES, LOG_SETTINGS, PATHS
from metrics_export import (
    create_batch_excel,
    summary_line,
    write_frames,
    write_metrics_csv,
    write_phases_csv,
)
from oracle_suites import run_all_suites
from scenario_loader import load_scenario
from sim_engine import STATUS_SUCCESS, STATUS_TIMEOUT, run
from swarm_errors import SwarmError

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class SwarmArgumentParser(argparse.ArgumentParser):
    """Ошибки разбора аргументов завершают процесс с кодом 64"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CODES["usage"], f"{self.prog}: error: {message}\n")


def setup_logging():
    # Настройка логирования
    root = logging.getLogger()
    if root.handlers:
        return
    os.makedirs(PATHS["log_dir"], exist_ok=True)
    logging.basicConfig(
        format=LOG_SETTINGS["format"],
        level=getattr(logging, LOG_SETTINGS["log_level"].upper(), logging.INFO),
        handlers=[
            logging.FileHandler(os.path.join(PATHS["log_dir"], LOG_SETTINGS["log_file"]), encoding="utf-8"),
            logging.StreamHandler(),
        ],
    )


def parse_seeds(text):
    """'A..B' (включительно) или одно число"""
    start, sep, end = text.partition("..")
    try:
        first = int(start)
        last = int(end) if sep else first
    except ValueError:
        raise UsageError(f"неверный диапазон seed '{text}', ожидалось A..B") from None
    if last < first:
        raise UsageError(f"пустой диапазон seed '{text}'")
    return list(range(first, last + 1))


def collect_overrides(args):
    overrides = {
        "seed": getattr(args, "seed", None),
        "drop_prob": args.drop,
        "dist_noise_sigma": args.sigma,
        "bias_frac": args.bias_frac,
        "clock_skew_frac": args.skew,
        "frames_every": getattr(args, "frames_every", None),
        "plan": os.path.abspath(args.plan) if args.plan else None,
        "time_limit_1": args.t1,
        "time_limit_2": args.t2,
        "time_limit_3": args.t3,
        "time_limit_4": args.t4,
    }
    if args.no_repair:
        overrides["repair_enabled"] = False
    return overrides


def _exit_code(results):
    statuses = {r.status for r in results}
    if statuses == {STATUS_SUCCESS}:
        return EXIT_CODES["ok"]
    if statuses - {STATUS_SUCCESS, STATUS_TIMEOUT}:
        return EXIT_CODES["fail"]
    return EXIT_CODES["timeout"]


def _outcome_line(result):
    verdict = f"PASS({result.symmetry})" if result.success else "FAIL"
    if result.truth is not None and result.truth.true_coord is None and result.success:
        verdict = "PASS(groups)"
    return (f"seed={result.seed} status={result.status} verify={verdict} "
            f"completion_s={result.completion_s:.3f} origin={result.origin_corner}")


def cmd_run(args):
    scenario = load_scenario(args.scenario).with_overrides(collect_overrides(args))
    result = run(scenario.spec, scenario.config, scenario.noise, scenario.plan, scenario.timers)

    out_dir = args.out or os.path.join(PATHS["out_dir"], scenario.name)
    write_metrics_csv(os.path.join(out_dir, "metrics.csv"), [result])
    write_phases_csv(os.path.join(out_dir, "phases.csv"), [result])
    frames = write_frames(out_dir, result)
    if frames:
        logger.info(f"Сохранено кадров: {frames}")
    if result.verify_details and not result.success:
        logger.warning(result.verify_details)

    print(_outcome_line(result))
    return _exit_code([result])


def _run_seed(job):
    """Один прогон серии (в отдельном процессе)"""
    scenario_path, overrides, seed = job
    scenario = load_scenario(scenario_path).with_overrides({**overrides, "seed": seed, "frames_every": 0})
    result = run(scenario.spec, scenario.config, scenario.noise, scenario.plan, scenario.timers)
    # состояние агентов и истинный мир не нужны для метрик
    result.agents = []
    result.truth = None
    result.step_frames = {}
    return result


def cmd_batch(args):
    seeds = parse_seeds(args.seeds)
    # проверяем сценарий до запуска процессов
    overrides = collect_overrides(args)
    scenario = load_scenario(args.scenario).with_overrides(overrides)
    jobs = [(args.scenario, overrides, seed) for seed in seeds]

    workers = args.workers or BATCH_SETTINGS["workers"]
    logger.info(f"Серия {scenario.name}: {len(seeds)} прогонов, процессов {workers}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_seed, jobs))
    else:
        results = [_run_seed(job) for job in jobs]

    out_dir = args.out or os.path.join(PATHS["out_dir"], f"{scenario.name}_batch")
    write_metrics_csv(os.path.join(out_dir, "metrics.csv"), results)
    write_phases_csv(os.path.join(out_dir, "phases.csv"), results)
    if args.xlsx:
        create_batch_excel(results, args.xlsx, scenario.name)

    print(summary_line(scenario.name, results))
    return _exit_code(results)


def cmd_verify(args):
    results = run_all_suites(eps_values=tuple(args.eps))
    for result in results:
        print(f"{result.name}: {'PASS' if result.passed else 'FAIL'} {result.details}")
    return EXIT_CODES["ok"] if all(r.passed for r in results) else EXIT_CODES["fail"]


def _add_run_options(parser):
    parser.add_argument("scenario", help="файл сценария")
    parser.add_argument("--drop", type=float, help="вероятность потери сообщения")
    parser.add_argument("--sigma", type=float, help="СКО шума расстояния, мм")
    parser.add_argument("--bias-frac", type=float, dest="bias_frac", help="доля агентов со смещением расстояния")
    parser.add_argument("--skew", type=float, help="разброс хода часов, доля")
    parser.add_argument("--plan", help="файл плана ролей")
    parser.add_argument("--out", help="каталог результатов")
    parser.add_argument("--no-repair", action="store_true", dest="no_repair", help="отключить ремонт соседей")
    for number in range(1, 5):
        parser.add_argument(f"--t{number}", type=int, help=f"time_limit_{number}, тики")


def build_parser():
    parser = SwarmArgumentParser(prog="swarm_cli.py", description="Симулятор самолокализации роя на решётке")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="один прогон")
    _add_run_options(run_parser)
    run_parser.add_argument("--seed", type=int)
    run_parser.add_argument("--frames-every", type=float, dest="frames_every",
                            help="сохранять кадр каждые N секунд модели")
    run_parser.set_defaults(handler=cmd_run)

    batch_parser = commands.add_parser("batch", help="серия прогонов по диапазону seed")
    _add_run_options(batch_parser)
    batch_parser.add_argument("--seeds", required=True, help="диапазон A..B")
    batch_parser.add_argument("--workers", type=int, help="число процессов")
    batch_parser.add_argument("--xlsx", help="сводка серии в Excel")
    batch_parser.set_defaults(handler=cmd_batch)

    verify_parser = commands.add_parser("verify", help="проверочные наборы")
    verify_parser.add_argument("--eps", type=float, nargs="*", default=[0.35],
                               help="значения eps для проверки границы диапазона")
    verify_parser.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None):
    """Запуск CLI; возвращает код завершения"""
    args = build_parser().parse_args(argv)
    setup_logging()
    try:
        return args.handler(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES["usage"]
    except OSError as e:
        logger.error(f"Ошибка ввода-вывода: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES["usage"]
    except SwarmError as e:
        logger.error(f"Ошибка сценария: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES["usage"]


if __name__ == "__main__":
    sys.exit(main())
