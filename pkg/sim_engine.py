"""
Детерминированный симулятор: часы агентов с дрейфом, широковещательная
среда с потерями и шумом расстояния, главный цикл прогона.

Вся случайность идёт из одного генератора numpy с фиксированным порядком
потребления: ошибка размещения, дрейф часов, сдвиги передачи, смещённые
агенты, инициализация агентов, затем по тикам.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from config import NOISE_DEFAULTS, PROTOCOL_SETTINGS, SIM_DEFAULTS
from kilobot_agent import (
    R3_BASE,
    KilobotAgent,
    Phase,
    PhaseTimers,
    PositionGroup,
    led_color,
    phase_name,
)
from lattice_world import (
    Topology,
    check_comm_range,
    corner_name,
    expected_groups,
    generate,
    pairwise_distances,
    symmetry_dims,
    verify_coords,
)
from swarm_errors import InvalidSpecError
from wire_format import decode, encode

logger = logging.getLogger(__name__)

STATUS_SUCCESS = "SUCCESS"
STATUS_FAIL = "FAIL"
STATUS_TIMEOUT = "TIMEOUT"


@dataclass
class NoiseModel:
    drop_prob: float = NOISE_DEFAULTS["drop_prob"]
    dist_noise_sigma: float = NOISE_DEFAULTS["dist_noise_sigma"]
    dist_noise_bias: float = NOISE_DEFAULTS["dist_noise_bias"]
    clock_skew_frac: float = NOISE_DEFAULTS["clock_skew_frac"]
    bias_frac: float = NOISE_DEFAULTS["bias_frac"]
    bias_mm: float = NOISE_DEFAULTS["bias_mm"]

    def validate(self):
        if not 0.0 <= self.drop_prob <= 1.0:
            raise InvalidSpecError(f"drop_prob={self.drop_prob} вне [0, 1]")
        if self.dist_noise_sigma < 0 or self.clock_skew_frac < 0:
            raise InvalidSpecError("sigma и skew не могут быть отрицательными")
        if not 0.0 <= self.bias_frac <= 1.0:
            raise InvalidSpecError(f"bias_frac={self.bias_frac} вне [0, 1]")


@dataclass
class SimConfig:
    seed: int = SIM_DEFAULTS["seed"]
    comm_range: float = SIM_DEFAULTS["comm_range"]
    msg_rate: float = SIM_DEFAULTS["msg_rate"]
    tick_rate: int = SIM_DEFAULTS["tick_rate"]
    max_sim_seconds: float = SIM_DEFAULTS["max_sim_seconds"]
    repair_enabled: bool = SIM_DEFAULTS["repair_enabled"]
    frames_every: float = SIM_DEFAULTS["frames_every"]
    departure_delay_ticks: int = PROTOCOL_SETTINGS["departure_delay_ticks"]
    r3_steps: int | None = None     # None - один цикл плана
    radius_eps: float | None = None  # None - r = 1.5x + 10

    @property
    def message_period(self):
        """Период передачи в локальных тиках"""
        return max(1, int(round(self.tick_rate / self.msg_rate)))

    def validate(self):
        if self.comm_range <= 0 or self.msg_rate <= 0 or self.tick_rate <= 0 or self.max_sim_seconds <= 0:
            raise InvalidSpecError("comm_range, msg_rate, tick_rate и max_sim_seconds должны быть положительными")
        if self.radius_eps is not None and not 0 <= self.radius_eps < PROTOCOL_SETTINGS["hex_radius_eps_max"]:
            raise InvalidSpecError(f"radius_eps={self.radius_eps} вне [0, {PROTOCOL_SETTINGS['hex_radius_eps_max']})")


class AgentClock:
    """Локальные часы: накопитель (1 + skew) за глобальный тик"""

    def __init__(self, skew=0.0):
        self.skew = skew
        self.accumulated = 0.0

    def advance(self):
        """Сколько раз цикл агента срабатывает в этот глобальный тик (0, 1 или 2)"""
        self.accumulated += 1.0 + self.skew
        fires = int(self.accumulated)
        self.accumulated -= fires
        return fires


class Medium:
    """Широковещательная среда: дальность, потери и шум оценки расстояния"""

    def __init__(self, positions, comm_range, noise, sender_bias=None):
        self.noise = noise
        distances = pairwise_distances(positions)
        n = len(positions)
        self.sender_bias = np.zeros(n) if sender_bias is None else np.asarray(sender_bias, dtype=float)
        self.recipients = []
        self.true_distances = []
        for i in range(n):
            mask = distances[i] <= comm_range
            mask[i] = False
            idx = np.flatnonzero(mask)
            self.recipients.append(idx)
            self.true_distances.append(distances[i, idx])

    def deliver(self, sender, rng):
        """Получатели и их оценки расстояния; возвращает (индексы, оценки, число потерь)"""
        idx = self.recipients[sender]
        if len(idx) == 0:
            return idx, np.empty(0), 0
        kept = rng.random(len(idx)) >= self.noise.drop_prob
        recipients = idx[kept]
        estimates = self.true_distances[sender][kept] + self.noise.dist_noise_bias + self.sender_bias[sender]
        if self.noise.dist_noise_sigma > 0:
            estimates = estimates + rng.normal(0.0, self.noise.dist_noise_sigma, len(recipients))
        return recipients, np.maximum(estimates, 0.0), int(len(idx) - len(recipients))


@dataclass
class RunResult:
    seed: int
    status: str
    completion_s: float
    phase_r1_s: float | None = None
    phase_r2_s: float | None = None
    origin_corner: str = "none"
    symmetry: str = ""
    msgs_sent: int = 0
    msgs_dropped: int = 0
    verify_details: str = ""
    origin_dims: tuple | None = None
    dims_consistent: bool = False
    group_counts: tuple = (0, 0, 0)
    groups_match: bool = False
    faults: dict = field(default_factory=dict)
    election_tie: bool = False
    skew_events: int = 0
    max_phase_spread: int = 0
    max_step_switch_s: float = 0.0
    phase_first_s: dict = field(default_factory=dict)
    phase_all_s: dict = field(default_factory=dict)
    frames: list = field(default_factory=list)
    step_frames: dict = field(default_factory=dict)
    coords: list = field(default_factory=list)
    truth: object = None
    agents: list = field(default_factory=list)

    @property
    def success(self):
        return self.status == STATUS_SUCCESS


class PhaseTracker:
    """Первые входы в фазы: любым агентом и всеми агентами"""

    def __init__(self, n_agents):
        self.phases = np.zeros(n_agents, dtype=np.int64)
        self.tick = 0
        self.first_entry = {int(Phase.SR1A_P1): 0}
        self.all_entry = {int(Phase.SR1A_P1): 0}
        self.entered = {int(Phase.SR1A_P1): n_agents}

    def __call__(self, index, phase):
        self.phases[index] = phase
        self.first_entry.setdefault(phase, self.tick)
        self.entered[phase] = self.entered.get(phase, 0) + 1
        if self.entered[phase] == len(self.phases):
            self.all_entry[phase] = self.tick


def _roles(agents):
    return [led_color(agent.state) for agent in agents]


def _isolated_biased(biased, adjacency):
    """Смещённые агенты без смещённых соседей (отбор по порядку индексов)"""
    kept = np.zeros(len(biased), dtype=bool)
    for i in np.flatnonzero(biased):
        if not any(kept[j] for j in adjacency[i]):
            kept[i] = True
    return kept


def _final_phase(spec, config, plan):
    if spec.topology == Topology.HEXAGONAL:
        return int(Phase.SR2A_ELECT)
    if config.r3_steps is not None:
        return R3_BASE + config.r3_steps
    return R3_BASE + (len(plan.steps) if plan else 0)


def run(spec, config=None, noise=None, plan=None, timers=None):
    """Один прогон до завершения всех агентов или до max_sim_seconds"""
    config = config or SimConfig()
    noise = noise or NoiseModel()
    config.validate()
    noise.validate()
    check_comm_range(spec, config.comm_range, config.radius_eps)
    if timers is None:
        step_ticks = int(round((plan.step_seconds if plan else SIM_DEFAULTS["step_seconds"]) * config.tick_rate))
        timers = PhaseTimers(r3_step_ticks=step_ticks)

    rng = np.random.default_rng(config.seed)
    truth = generate(spec, rng)
    n = truth.n_agents
    period = config.message_period

    skews = rng.uniform(-noise.clock_skew_frac, noise.clock_skew_frac, n)
    offsets = rng.integers(0, period, n)
    biased = _isolated_biased(rng.random(n) < noise.bias_frac, truth.adjacency)
    sender_bias = np.where(biased, noise.bias_mm, 0.0)

    final_phase = _final_phase(spec, config, plan)
    tracker = PhaseTracker(n)
    agents = []
    for i in range(n):
        agent = KilobotAgent(i, rng, timers=timers, plan=plan, final_phase=final_phase,
                             repair_enabled=config.repair_enabled,
                             departure_delay_ticks=config.departure_delay_ticks,
                             radius_eps=config.radius_eps)
        agent.listener = tracker
        agents.append(agent)
    clocks = [AgentClock(float(s)) for s in skews]
    medium = Medium(truth.positions, config.comm_range, noise, sender_bias)

    logger.info(
        f"Прогон seed={config.seed}: {n} агентов, {spec.topology.value}, "
        f"потери {noise.drop_prob:.2f}, sigma {noise.dist_noise_sigma} мм, "
        f"смещённых агентов {int(biased.sum())}"
    )

    max_ticks = int(round(config.max_sim_seconds * config.tick_rate))
    frame_ticks = int(round(config.frames_every * config.tick_rate)) if config.frames_every else 0
    msgs_sent = msgs_dropped = 0
    max_spread = 0
    in_flight = []
    frames = []
    step_frames = {}
    completed_tick = None
    tick = 0

    while tick < max_ticks:
        tick += 1
        tracker.tick = tick

        # Сначала доставка сообщений прошлого тика, затем циклы агентов
        for sender, payload in in_flight:
            msg = decode(payload)
            recipients, estimates, dropped = medium.deliver(sender, rng)
            msgs_dropped += dropped
            for j, distance in zip(recipients.tolist(), estimates.tolist()):
                agents[j].receive(msg, distance)
        in_flight = []

        for i, agent in enumerate(agents):
            for _ in range(clocks[i].advance()):
                agent.tick()
                if (agent.state.local_tick - offsets[i]) % period == 0:
                    msg = agent.outgoing()
                    if msg is not None:
                        in_flight.append((i, encode(msg)))
                        msgs_sent += 1

        low, high = int(tracker.phases.min()), int(tracker.phases.max())
        max_spread = max(max_spread, high - low)
        if low == high and low >= R3_BASE and low - R3_BASE not in step_frames:
            step_frames[low - R3_BASE] = _roles(agents)
        if frame_ticks and tick % frame_ticks == 0:
            frames.append((tick / config.tick_rate, _roles(agents)))
        if low >= final_phase:
            completed_tick = tick
            break

    return _collect(spec, config, truth, agents, tracker, completed_tick, tick,
                    msgs_sent, msgs_dropped, max_spread, frames, step_frames)


def _seconds(tick, config):
    return None if tick is None else tick / config.tick_rate


def _collect(spec, config, truth, agents, tracker, completed_tick, last_tick,
             msgs_sent, msgs_dropped, max_spread, frames, step_frames):
    states = [agent.state for agent in agents]
    faults = {i: s.fault for i, s in enumerate(states) if s.fault}
    groups = [int(s.my_position) for s in states]
    group_counts = tuple(groups.count(int(g)) for g in (PositionGroup.CORNER, PositionGroup.BORDER, PositionGroup.MIDDLE))
    groups_match = groups == expected_groups(truth)

    result = RunResult(
        seed=config.seed,
        status=STATUS_TIMEOUT,
        completion_s=(completed_tick or last_tick) / config.tick_rate,
        phase_r1_s=_seconds(tracker.all_entry.get(int(Phase.SR2A_ELECT)), config),
        phase_r2_s=_seconds(tracker.all_entry.get(R3_BASE), config),
        msgs_sent=msgs_sent,
        msgs_dropped=msgs_dropped,
        group_counts=group_counts,
        groups_match=groups_match,
        faults=faults,
        election_tie=_election_tie(states, config),
        skew_events=sum(s.skew_events for s in states),
        max_phase_spread=max_spread,
        max_step_switch_s=_max_step_switch(tracker, config),
        phase_first_s={p: t / config.tick_rate for p, t in sorted(tracker.first_entry.items())},
        phase_all_s={p: t / config.tick_rate for p, t in sorted(tracker.all_entry.items())},
        frames=frames,
        step_frames=step_frames,
        coords=[s.coord for s in states],
        truth=truth,
        agents=agents,
    )

    origins = [i for i, s in enumerate(states) if s.is_origin]
    if len(origins) == 1:
        origin = states[origins[0]]
        result.origin_corner = corner_name(truth, origins[0])
        if origin.width:
            result.origin_dims = (origin.width, origin.height)

    if completed_tick is None:
        logger.warning(f"seed={config.seed}: TIMEOUT после {result.completion_s:.1f} с, "
                       f"минимальная фаза {phase_name(int(tracker.phases.min()))}")
        return result

    if spec.topology == Topology.HEXAGONAL:
        passed = groups_match and not faults
        result.verify_details = "" if groups_match else f"группы {group_counts} не совпали с истинными"
    else:
        verdict = verify_coords(result.coords, truth)
        result.symmetry = verdict.symmetry if verdict.passed else ""
        result.verify_details = verdict.details
        if verdict.passed:
            result.dims_consistent = result.origin_dims == symmetry_dims(spec, verdict.symmetry)
        passed = verdict.passed and result.dims_consistent and not faults

    result.status = STATUS_SUCCESS if passed else STATUS_FAIL
    if passed:
        logger.info(f"seed={config.seed}: SUCCESS за {result.completion_s:.1f} с, симметрия {result.symmetry or '-'}")
    else:
        logger.warning(f"seed={config.seed}: FAIL ({result.verify_details or faults})")
    return result


def _max_step_switch(tracker, config):
    """Наибольший разброс входа агентов в шаг R3 (секунды)"""
    spread = 0
    for phase, first in tracker.first_entry.items():
        if phase >= R3_BASE and phase in tracker.all_entry:
            spread = max(spread, tracker.all_entry[phase] - first)
    return spread / config.tick_rate


def _election_tie(states, config):
    """Два угла вытянули одинаковый наименьший токен"""
    tokens = [s.origin_token for s in states
              if s.my_position == PositionGroup.CORNER and s.origin_token is not None]
    if not tokens or tokens.count(min(tokens)) < 2:
        return False
    logger.warning(f"seed={config.seed}: ELECTION_TIE, у {tokens.count(min(tokens))} углов одинаковый токен")
    return True
