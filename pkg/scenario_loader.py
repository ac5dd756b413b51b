"""
Загрузка файлов сценариев.

Формат: построчно `ключ = значение`, '#' в начале строки - комментарий.
Значения файла - значения по умолчанию для прогона, флаги CLI их переопределяют.
"""
import logging
import math
import os
from dataclasses import dataclass

from action_plan import load_plan
from config import PROTOCOL_SETTINGS, PROTOCOL_TIMERS, SIM_DEFAULTS
from kilobot_agent import PhaseTimers
from lattice_world import LatticeSpec, Topology
from sim_engine import NoiseModel, SimConfig
from swarm_errors import ScenarioError

logger = logging.getLogger(__name__)


def _parse_bool(value):
    lowered = value.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"ожидалось true/false, получено '{value}'")


def _parse_topology(value):
    aliases = {"rect": Topology.RECTANGULAR, "hex": Topology.HEXAGONAL}
    lowered = value.lower()
    if lowered in aliases:
        return aliases[lowered]
    return Topology(lowered)


def _parse_row_lengths(value):
    lengths = tuple(int(part) for part in value.replace(" ", "").split(",") if part)
    if not lengths:
        raise ValueError("пустой список рядов")
    return lengths


# ключ -> преобразование строки
KEY_PARSERS = {
    "topology": _parse_topology,
    "cols": int,
    "rows": int,
    "row_lengths": _parse_row_lengths,
    "dx_mm": float,
    "dy_mm": float,
    "jitter_eps": float,
    "seed": int,
    "drop_prob": float,
    "dist_noise_sigma": float,
    "dist_noise_bias": float,
    "clock_skew_frac": float,
    "bias_frac": float,
    "bias_mm": float,
    "comm_range": float,
    "msg_rate": float,
    "tick_rate": int,
    "max_sim_seconds": float,
    "plan": str,
    "r3_steps": int,
    "r3_seconds": float,
    "time_limit_1": int,
    "time_limit_2": int,
    "time_limit_3": int,
    "time_limit_4": int,
    "repair_delay": int,
    "sr1c_ticks": int,
    "axes_ticks": int,
    "sr2c_ticks": int,
    "repair_enabled": _parse_bool,
    "frames_every": float,
    "departure_delay_ticks": int,
    "radius_eps": float,
}

KEY_ALIASES = {"t1": "time_limit_1", "t2": "time_limit_2", "t3": "time_limit_3", "t4": "time_limit_4"}


@dataclass
class Scenario:
    name: str
    base_dir: str
    values: dict
    spec: LatticeSpec
    config: SimConfig
    noise: NoiseModel
    timers: PhaseTimers
    plan: object = None
    plan_path: str | None = None

    def with_overrides(self, overrides):
        """Новый сценарий с переопределёнными значениями (None пропускается)"""
        merged = dict(self.values)
        merged.update({key: value for key, value in overrides.items() if value is not None})
        return build_scenario(merged, self.base_dir, self.name)


def parse_values(text):
    """Разбирает текст сценария в словарь типизированных значений"""
    values = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ScenarioError(f"ожидалось 'ключ = значение', получено '{line}'", line_no)
        key = KEY_ALIASES.get(key, key)
        parser = KEY_PARSERS.get(key)
        if parser is None:
            raise ScenarioError(f"неизвестный ключ '{key}'", line_no)
        try:
            values[key] = parser(value)
        except ValueError as e:
            raise ScenarioError(f"{key}: {e}", line_no) from None
    return values


def build_scenario(values, base_dir=".", name="scenario"):
    """Собирает LatticeSpec, SimConfig, NoiseModel, PhaseTimers и план из значений"""
    dx = values.get("dx_mm", 35.0)
    spec = LatticeSpec(
        topology=values.get("topology", Topology.RECTANGULAR),
        cols=values.get("cols", 5),
        rows=values.get("rows", 5),
        row_lengths=values.get("row_lengths", ()),
        dx=dx,
        dy=values.get("dy_mm", dx),
        jitter_eps=values.get("jitter_eps", 0.0),
    )
    noise = NoiseModel(**{
        key: values[key]
        for key in ("drop_prob", "dist_noise_sigma", "dist_noise_bias", "clock_skew_frac", "bias_frac", "bias_mm")
        if key in values
    })

    plan, plan_path = None, None
    if values.get("plan"):
        plan_path = values["plan"]
        if not os.path.isabs(plan_path):
            plan_path = os.path.normpath(os.path.join(base_dir, plan_path))
        plan = load_plan(plan_path)

    tick_rate = values.get("tick_rate", SIM_DEFAULTS["tick_rate"])
    step_seconds = plan.step_seconds if plan else SIM_DEFAULTS["step_seconds"]
    r3_steps = values.get("r3_steps")
    if "r3_seconds" in values:
        r3_steps = int(math.ceil(values["r3_seconds"] / step_seconds))

    config = SimConfig(
        seed=values.get("seed", SIM_DEFAULTS["seed"]),
        comm_range=values.get("comm_range", SIM_DEFAULTS["comm_range"]),
        msg_rate=values.get("msg_rate", SIM_DEFAULTS["msg_rate"]),
        tick_rate=tick_rate,
        max_sim_seconds=values.get("max_sim_seconds", SIM_DEFAULTS["max_sim_seconds"]),
        repair_enabled=values.get("repair_enabled", SIM_DEFAULTS["repair_enabled"]),
        frames_every=values.get("frames_every", SIM_DEFAULTS["frames_every"]),
        departure_delay_ticks=values.get("departure_delay_ticks", PROTOCOL_SETTINGS["departure_delay_ticks"]),
        r3_steps=r3_steps,
        radius_eps=values.get("radius_eps"),
    )
    timers = PhaseTimers(
        **{key: values.get(key, PROTOCOL_TIMERS[key]) for key in PROTOCOL_TIMERS},
        r3_step_ticks=int(round(step_seconds * tick_rate)),
    )
    return Scenario(name, base_dir, values, spec, config, noise, timers, plan, plan_path)


def load_scenario(path):
    """Читает файл сценария; пути к плану - относительно каталога сценария"""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    name = os.path.splitext(os.path.basename(path))[0]
    scenario = build_scenario(parse_values(text), os.path.dirname(os.path.abspath(path)), name)
    logger.info(f"Сценарий {name}: {scenario.spec.n_agents} агентов, план {scenario.plan_path or 'нет'}")
    return scenario
