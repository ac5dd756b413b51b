"""
Контроллер агента роя.

Каждый агент - одинаковый конечный автомат: получает события
(тик локальных часов, входящее сообщение с оценкой расстояния)
и выдаёт широковещательные сообщения. Фазы идут строго по порядку:
уникальные ID, список соседей с ремонтом, классификация позиции,
выбор начала координат, счёт границы, координаты, план ролей.
"""
import logging
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from action_plan import Role, r3_role
from config import PROTOCOL_SETTINGS, PROTOCOL_TIMERS
from lattice_math import (
    classify_position,
    corner_border_coords,
    corner_counts,
    infer_middle_coord,
    neighborhood_radius,
    swarm_dimensions,
)
from swarm_errors import (
    CountInconsistentError,
    FullBlacklistError,
    InvalidSpecError,
    OriginDegenerateError,
    SwarmError,
)
from wire_format import FLAG_NO_RELAY, REPAIR_MAX_IDS, TOKEN_BITS, Message, MessageType

logger = logging.getLogger(__name__)


class Phase(IntEnum):
    SR1A_P1 = 0
    SR1A_P2 = 1          # вместе с первой фазой SR1b (минимальное расстояние)
    SR1B_P2 = 2
    SR1B_REPAIR = 3
    SR1C = 4
    SR2A_ELECT = 5
    SR2A_AXES = 6
    SR2B_COUNT = 7
    SR2B_DISTRIBUTE = 8
    SR2C = 9


# Шаг k плана R3 имеет индекс фазы R3_BASE + k
R3_BASE = 10


def r3_phase(step):
    return R3_BASE + step


def phase_name(index):
    if index >= R3_BASE:
        return f"R3_STEP({index - R3_BASE})"
    return Phase(index).name


class PositionGroup(IntEnum):
    UNKNOWN = 0
    CORNER = 1
    BORDER = 2
    MIDDLE = 3
    FAULT = 4


# Сообщение более поздней фазы работает как синхронизация на эту фазу
IMPLIED_PHASE = {
    MessageType.SR1A_RELAY: Phase.SR1A_P2,
    MessageType.SR1B_REPAIR: Phase.SR1B_REPAIR,
    MessageType.SR1C_COUNT: Phase.SR1C,
    MessageType.SR2A_TOKEN: Phase.SR2A_ELECT,
    MessageType.SR2A_AXES: Phase.SR2A_AXES,
    MessageType.SR2B_COUNT: Phase.SR2B_COUNT,
    MessageType.SR2B_COUNT_NEARCORNER: Phase.SR2B_COUNT,
    MessageType.SR2B_TOTALS: Phase.SR2B_DISTRIBUTE,
    MessageType.SR2C_COORD: Phase.SR2C,
}

STATUS_COLORS = {
    PositionGroup.CORNER: Role.RED,
    PositionGroup.BORDER: Role.BLUE,
    PositionGroup.MIDDLE: Role.GREEN,
}


@dataclass
class PhaseTimers:
    """Длительности фаз в локальных тиках"""
    time_limit_1: int = PROTOCOL_TIMERS["time_limit_1"]
    time_limit_2: int = PROTOCOL_TIMERS["time_limit_2"]
    time_limit_3: int = PROTOCOL_TIMERS["time_limit_3"]
    time_limit_4: int = PROTOCOL_TIMERS["time_limit_4"]
    repair_delay: int = PROTOCOL_TIMERS["repair_delay"]
    sr1c_ticks: int = PROTOCOL_TIMERS["sr1c_ticks"]
    axes_ticks: int = PROTOCOL_TIMERS["axes_ticks"]
    sr2c_ticks: int = PROTOCOL_TIMERS["sr2c_ticks"]
    r3_step_ticks: int = 256

    def __post_init__(self):
        if not 0 < self.time_limit_1 < self.time_limit_2:
            raise InvalidSpecError(f"нужно 0 < t1 < t2, получено {self.time_limit_1}, {self.time_limit_2}")
        if self.time_limit_3 - self.time_limit_2 <= self.repair_delay:
            raise InvalidSpecError("окно ремонта пустое: t3 - t2 <= repair_delay")
        for name in ("time_limit_4", "sr1c_ticks", "axes_ticks", "sr2c_ticks", "r3_step_ticks"):
            if getattr(self, name) <= 0:
                raise InvalidSpecError(f"{name} должен быть положительным")

    def duration(self, phase):
        """Длительность фазы или None, если фазу завершает начало координат"""
        if phase >= R3_BASE:
            return self.r3_step_ticks
        return {
            Phase.SR1A_P1: self.time_limit_1,
            Phase.SR1A_P2: self.time_limit_2 - self.time_limit_1,
            Phase.SR1B_P2: self.repair_delay,
            Phase.SR1B_REPAIR: self.time_limit_3 - self.time_limit_2 - self.repair_delay,
            Phase.SR1C: self.sr1c_ticks,
            Phase.SR2A_ELECT: self.time_limit_4,
            Phase.SR2A_AXES: self.axes_ticks,
            Phase.SR2B_COUNT: None,
            Phase.SR2B_DISTRIBUTE: None,
            Phase.SR2C: self.sr2c_ticks,
        }[Phase(phase)]


@dataclass(slots=True)
class NeighborRecord:
    id: int
    nonce: int | None = None
    last_distance: float = 0.0
    neighbor_count: int | None = None
    position: PositionGroup = PositionGroup.UNKNOWN
    coord: tuple = (0, 0)


@dataclass
class AgentState:
    """Полное состояние протокола одного агента. (0, 0) - координата не назначена"""
    id: int = 0
    nonce: int = 0
    phase: int = Phase.SR1A_P1
    phase_start_tick: int = 0
    local_tick: int = 0
    blacklist: set = field(default_factory=set)
    id_list: list = field(default_factory=list)
    relay_index: int = 0
    neighbors: dict = field(default_factory=dict)
    distance_samples: dict = field(default_factory=dict)
    min_msg_distance: float = PROTOCOL_SETTINGS["min_distance_init"]
    radius: float = 0.0
    repair_offset: int = 0
    my_position: PositionGroup = PositionGroup.UNKNOWN
    origin_candidate: bool = False
    origin_token: int | None = None
    relay_token: int | None = None
    is_origin: bool = False
    lower_id_border: int | None = None
    my_count: int = 0
    count_source: PositionGroup = PositionGroup.UNKNOWN
    near_corner: bool = False
    c1: int = 0
    c2: int = 0
    c3: int = 0
    total_count: int = 0
    totals_known: bool = False
    totals_returned: bool = False
    width: int = 0
    height: int = 0
    coord: tuple = (0, 0)
    role: Role = Role.OFF
    departed_tick: int | None = None
    pending_sync: int | None = None
    skew_events: int = 0
    fault: str | None = None

    @property
    def coord_assigned(self):
        return self.coord[0] > 0 and self.coord[1] > 0


# ============================================
# SR1a: ЛОКАЛЬНО УНИКАЛЬНЫЕ ID
# ============================================

def pick_fresh_id(blacklist, rng):
    """Случайный ID из [0, 255] вне чёрного списка"""
    space = PROTOCOL_SETTINGS["id_space"]
    if len(blacklist) >= space:
        raise FullBlacklistError("все ID в чёрном списке, рой слишком плотный")
    while True:
        candidate = int(rng.integers(0, space))
        if candidate not in blacklist:
            return candidate


def _repick_id(state, rng):
    old_id = state.id
    state.blacklist.add(old_id)
    state.blacklist.update(known_id for known_id, _ in state.id_list)
    state.id = pick_fresh_id(state.blacklist, rng)
    logger.debug(f"ID {old_id} занят, новый ID {state.id}")


def sr1a_handle(state, msg, rng):
    """Обработка сообщений SR1a в фазах 1 и 2"""
    if state.phase == Phase.SR1A_P1:
        if msg.type != MessageType.SR1A_ID:
            return state
        state.blacklist.add(msg.sender_id)
        if msg.sender_id == state.id:
            _repick_id(state, rng)
        return state

    if state.phase != Phase.SR1A_P2 or msg.type != MessageType.SR1A_RELAY:
        return state

    duplicate = msg.sender_id == state.id
    if msg.has_relay:
        if msg.relay_id == state.id:
            duplicate = duplicate or msg.relay_nonce != state.nonce
        else:
            state.blacklist.add(msg.relay_id)

    if msg.sender_id != state.id:
        state.blacklist.add(msg.sender_id)
        for i, (known_id, _) in enumerate(state.id_list):
            if known_id == msg.sender_id:
                state.id_list[i] = (msg.sender_id, msg.nonce)
                break
        else:
            state.id_list.append((msg.sender_id, msg.nonce))

    if duplicate:
        _repick_id(state, rng)
    return state


def record_min_distance(state, distance):
    """Первая фаза SR1b: минимальное расстояние без заведомо ложных оценок"""
    if distance >= PROTOCOL_SETTINGS["robot_body_length"]:
        state.min_msg_distance = min(state.min_msg_distance, distance)
    return state


# ============================================
# SR1b: СПИСОК СОСЕДЕЙ И РЕМОНТ
# ============================================

def sr1b_filter(state, msg, distance):
    """Добавляет отправителя в соседи, если он ближе радиуса r"""
    state.distance_samples.setdefault(msg.sender_id, []).append(distance)
    record = state.neighbors.get(msg.sender_id)
    if record is not None:
        record.last_distance = distance
    elif distance < state.radius:
        state.neighbors[msg.sender_id] = NeighborRecord(msg.sender_id, last_distance=distance)
    return state


def sr1b_prune(state):
    """Конец второй фазы SR1b: убирает соседей, у которых медиана оценок не меньше r.

    Одна заниженная оценка от робота через клетку не делает его соседом.
    """
    min_samples = PROTOCOL_SETTINGS["neighbor_min_samples"]
    for sender_id in list(state.neighbors):
        samples = state.distance_samples.get(sender_id, ())
        if len(samples) < min_samples:
            continue
        median = float(np.median(samples))
        if median >= state.radius:
            del state.neighbors[sender_id]
            logger.debug(f"ID {state.id}: сосед {sender_id} отсеян, медиана {median:.1f} мм >= r {state.radius:.1f}")
    state.distance_samples.clear()
    return state


def sr1b_repair(state, msg, distance=0.0):
    """Отправитель, считающий нас соседом, становится нашим соседом"""
    if state.id in msg.neighbor_ids and msg.sender_id not in state.neighbors:
        state.neighbors[msg.sender_id] = NeighborRecord(msg.sender_id, last_distance=distance)
        logger.debug(f"ID {state.id}: ремонт добавил соседа {msg.sender_id} ({distance:.1f} мм)")
    return state


# ============================================
# SR1c: ГРУППА ПОЗИЦИИ
# ============================================

def record_neighbor_count(state, msg):
    record = state.neighbors.get(msg.sender_id)
    if record is None:
        return state
    record.neighbor_count = msg.neighbor_count
    if msg.position:
        record.position = PositionGroup(msg.position)

    # Все числа известны - классификация уже окончательная
    if state.my_position == PositionGroup.UNKNOWN and all(
        rec.neighbor_count is not None for rec in state.neighbors.values()
    ):
        state.my_position = PositionGroup(classify_position(
            len(state.neighbors), [rec.neighbor_count for rec in state.neighbors.values()]
        ))
    return state


def finalize_position(state):
    """Классификация по концу SR1c с теми числами, что успели прийти"""
    if state.my_position != PositionGroup.UNKNOWN:
        return state
    counts = [rec.neighbor_count for rec in state.neighbors.values() if rec.neighbor_count is not None]
    missing = len(state.neighbors) - len(counts)
    if missing:
        logger.warning(f"ID {state.id}: нет числа соседей у {missing} соседей, классификация по неполным данным")
    state.my_position = PositionGroup(classify_position(len(state.neighbors), counts))
    if state.my_position == PositionGroup.FAULT:
        state.fault = "NO_NEIGHBORS"
    return state


# ============================================
# SR2a: НАЧАЛО И НАПРАВЛЕНИЕ ОСЕЙ
# ============================================

def draw_origin_token(rng):
    """Случайный токен из 68 бит (9 случайных байт без младшего полубайта)"""
    return int.from_bytes(rng.bytes(9), "big") >> (72 - TOKEN_BITS)


def sr2a_elect(state, msg):
    """Выборы: угол выбывает на строго меньшем токене, остальные пересылают минимум.

    Равный токен - обычно свой же, вернувшийся через соседей; он ничего не меняет.
    Совпадение токенов разных углов ищет симулятор после прогона.
    """
    if msg.type != MessageType.SR2A_TOKEN:
        return state
    if state.my_position == PositionGroup.CORNER:
        if not state.origin_candidate:
            return state
        if msg.token < state.origin_token:
            state.origin_candidate = False
            logger.debug(f"ID {state.id}: выбыл из выборов начала координат")
        return state
    if state.relay_token is None or msg.token < state.relay_token:
        state.relay_token = msg.token
    return state


def decide_origin(state):
    if state.my_position == PositionGroup.CORNER and state.origin_candidate:
        state.is_origin = True
        state.coord = (1, 1)
        state.my_count = 1
        state.count_source = PositionGroup.CORNER
        logger.info(f"ID {state.id} стал началом координат")
    return state


def _inferred_border_neighbors(state):
    # Соседи угла: две границы и одна середина с наибольшим числом соседей
    counted = [rec for rec in state.neighbors.values() if rec.neighbor_count is not None]
    if not counted:
        return []
    top = max(rec.neighbor_count for rec in counted)
    return [rec.id for rec in counted if rec.neighbor_count < top]


def sr2a_assign_axes(state):
    """Сообщение начала координат: (my_id, 1, 1, lower_id_border)"""
    borders = sorted(rec.id for rec in state.neighbors.values() if rec.position == PositionGroup.BORDER)
    if len(borders) != 2:
        borders = sorted(_inferred_border_neighbors(state))
    if len(borders) != 2 or borders[0] == borders[1]:
        raise OriginDegenerateError(f"у начала координат {len(borders)} соседей BORDER вместо 2")
    state.lower_id_border = borders[0]
    return Message(MessageType.SR2A_AXES, sender_id=state.id, x=1, y=1, lower_id_border=borders[0])


def sr2a_axes_handle(state, msg):
    """Соседи BORDER начала координат получают (2,1) или (1,2)"""
    if (state.my_position != PositionGroup.BORDER or state.coord != (0, 0)
            or msg.sender_id not in state.neighbors):
        return state
    if state.id == msg.lower_id_border:
        state.coord = (2, 1)
        state.my_count = 2
        state.count_source = PositionGroup.CORNER
        _update_count_header(state)
    else:
        state.coord = (1, 2)
    logger.debug(f"ID {state.id}: координата оси {state.coord}")
    return state


# ============================================
# SR2b: СЧЁТ ГРАНИЦЫ
# ============================================

def _update_count_header(state):
    corners = sum(1 for rec in state.neighbors.values() if rec.position == PositionGroup.CORNER)
    allowed = 1 if state.count_source == PositionGroup.CORNER else 0
    state.near_corner = state.my_position == PositionGroup.BORDER and corners > allowed


def sr2b_count_step(state, msg, distance):
    """Один шаг счёта по границе"""
    if distance >= state.radius:
        return state
    if msg.type == MessageType.SR2B_COUNT_NEARCORNER and state.my_position != PositionGroup.CORNER:
        return state
    threshold = PROTOCOL_SETTINGS["origin_count_threshold"]

    if state.is_origin:
        if state.total_count == 0 and msg.count > threshold:
            state.total_count = msg.count
            state.c1, state.c2, state.c3 = msg.c1, msg.c2, msg.c3
            state.totals_known = True
            logger.info(f"Начало координат: счёт границы вернулся, всего {msg.count}, C=({msg.c1},{msg.c2},{msg.c3})")
        return state

    if state.my_count:
        return state
    if state.coord == (1, 2):
        if msg.count <= threshold:
            return state
    elif msg.count < 2:
        return state

    if state.my_position == PositionGroup.BORDER:
        state.my_count = msg.count + 1
        state.c1, state.c2, state.c3 = msg.c1, msg.c2, msg.c3
        state.count_source = PositionGroup(msg.position) if msg.position else PositionGroup.BORDER
        _update_count_header(state)
    elif state.my_position == PositionGroup.CORNER:
        state.my_count = msg.count + 1
        slots = [msg.c1, msg.c2, msg.c3]
        if 0 in slots:
            slots[slots.index(0)] = state.my_count
        state.c1, state.c2, state.c3 = slots
        state.count_source = PositionGroup.BORDER
    return state


def sr2b_distribute(state, msg):
    """Итоги счёта идут по границе в том же направлении"""
    if msg.type != MessageType.SR2B_TOTALS:
        return state
    if state.is_origin:
        if state.total_count and msg.sender_count == state.total_count:
            state.totals_returned = True
        return state
    if (state.my_position not in (PositionGroup.BORDER, PositionGroup.CORNER)
            or state.totals_known or state.my_count == 0):
        return state
    if msg.sender_count != state.my_count - 1:
        return state
    state.total_count = msg.total
    state.c1, state.c2, state.c3 = msg.c1, msg.c2, msg.c3
    state.totals_known = True
    return state


# ============================================
# SR2c: КООРДИНАТЫ
# ============================================

def assign_border_coords(state):
    """Координаты CORNER/BORDER по номеру на границе"""
    if state.my_position not in (PositionGroup.BORDER, PositionGroup.CORNER) or state.my_count == 0:
        return state
    if state.totals_known and not state.width:
        state.width, state.height, _ = swarm_dimensions(state.c1, state.c2, state.c3, state.total_count)
    if state.coord_assigned or not state.width:
        return state
    if state.totals_known:
        c1, c2, c3 = state.c1, state.c2, state.c3
    else:
        c1, c2, c3 = corner_counts(state.width, state.height)
    state.coord = corner_border_coords(state.my_count, c1, c2, c3)
    return state


def coord_handle(state, msg):
    """Координаты соседей: размеры роя и вывод координат MIDDLE"""
    record = state.neighbors.get(msg.sender_id)
    if record is None:
        return state
    record.coord = (msg.x or record.coord[0], msg.y or record.coord[1])
    if not state.width and msg.width and msg.height:
        state.width, state.height = msg.width, msg.height

    if state.my_position == PositionGroup.MIDDLE:
        x, y = infer_middle_coord([rec.coord for rec in state.neighbors.values()])
        new_coord = (state.coord[0] or x, state.coord[1] or y)
        if new_coord != state.coord:
            state.coord = new_coord
            logger.debug(f"ID {state.id}: координата MIDDLE {state.coord}")
    elif not state.coord_assigned:
        assign_border_coords(state)
    return state


# ============================================
# СИНХРОНИЗАЦИЯ И R3
# ============================================

def sync_target(current, target, final_phase):
    """Целевая фаза перехода или None.

    target=None - истёк таймер текущей фазы. SYNC на текущую или прошедшую
    фазу игнорируется.
    """
    if target is None:
        target = current + 1
    elif target <= current:
        return None
    target = min(target, final_phase)
    return target if target > current else None


def led_color(state):
    """Цвет светодиода: роль в R3, до этого - группа позиции"""
    if state.phase >= R3_BASE:
        return state.role
    if state.fault:
        return Role.OFF
    if (state.phase in (Phase.SR2B_COUNT, Phase.SR2B_DISTRIBUTE)
            and state.my_position == PositionGroup.BORDER and state.my_count):
        return Role.WHITE
    return STATUS_COLORS.get(state.my_position, Role.OFF)


class KilobotAgent:
    """Один агент: состояние, часы фаз и обработчики сообщений"""

    def __init__(self, index, rng, timers=None, plan=None, final_phase=None,
                 repair_enabled=True, departure_delay_ticks=None, radius_eps=None):
        self.index = index
        self.rng = rng
        self.timers = timers or PhaseTimers()
        self.plan = plan
        self.final_phase = final_phase if final_phase is not None else r3_phase(1)
        self.repair_enabled = repair_enabled
        # None - r = 1.5x + 10, иначе r = (1 + radius_eps)x
        self.radius_eps = radius_eps
        self.departure_delay_ticks = (PROTOCOL_SETTINGS["departure_delay_ticks"]
                                      if departure_delay_ticks is None else departure_delay_ticks)
        self.axes_message = None
        # listener(index, phase) вызывается при входе в каждую фазу
        self.listener = None
        self.state = AgentState()
        self.state.id = pick_fresh_id(self.state.blacklist, rng)

    # --- события ---

    def tick(self):
        """Один проход цикла управления"""
        state = self.state
        state.local_tick += 1
        duration = self.timers.duration(state.phase)
        if duration is not None and state.local_tick - state.phase_start_tick >= duration:
            self.sync_advance()

    def receive(self, msg, distance):
        state = self.state
        if msg.type == MessageType.SYNC:
            self.sync_advance(msg.target_phase)
            return
        implied = IMPLIED_PHASE.get(msg.type)
        if implied is not None and implied > state.phase:
            self.sync_advance(int(implied))
        if state.fault:
            return
        try:
            self._dispatch(msg, distance)
        except SwarmError as e:
            self._fail(e)

    def sync_advance(self, target=None):
        """Переход фазы по таймеру или по SYNC; возвращает SYNC для пересылки"""
        state = self.state
        current = state.phase
        if target is not None and target > current + 1:
            state.skew_events += 1
            logger.warning(
                f"PHASE_SKEW: агент {self.index} в фазе {phase_name(current)} "
                f"получил синхронизацию на {phase_name(target)}"
            )
        target = sync_target(current, target, self.final_phase)
        if target is None:
            return None
        while state.phase < target:
            self._exit_phase(state.phase)
            state.phase += 1
            state.phase_start_tick = state.local_tick
            self._enter_phase(state.phase)
            if self.listener is not None:
                self.listener(self.index, state.phase)
        state.pending_sync = state.phase
        return Message(MessageType.SYNC, target_phase=state.phase)

    # --- исходящие сообщения ---

    def outgoing(self):
        """Сообщение для очередной передачи или None"""
        state = self.state
        if state.role == Role.DEPARTED and state.local_tick - state.departed_tick >= self.departure_delay_ticks:
            return None
        if state.pending_sync is not None:
            target, state.pending_sync = state.pending_sync, None
            return Message(MessageType.SYNC, target_phase=target)
        if state.fault:
            return None
        builder = self._BUILDERS.get(state.phase)
        return builder(self) if builder else None

    def _msg_sr1a_id(self):
        return Message(MessageType.SR1A_ID, sender_id=self.state.id)

    def _msg_sr1a_relay(self):
        state = self.state
        if not state.id_list:
            return Message(MessageType.SR1A_RELAY, FLAG_NO_RELAY, sender_id=state.id, nonce=state.nonce)
        relay_id, relay_nonce = state.id_list[state.relay_index % len(state.id_list)]
        state.relay_index += 1
        return Message(MessageType.SR1A_RELAY, sender_id=state.id, nonce=state.nonce,
                       relay_id=relay_id, relay_nonce=relay_nonce)

    def _msg_repair(self):
        state = self.state
        ids = sorted(state.neighbors)
        chunk_size = min(PROTOCOL_SETTINGS["repair_chunk"], REPAIR_MAX_IDS)
        if state.repair_offset >= len(ids):
            state.repair_offset = 0
        chunk = tuple(ids[state.repair_offset:state.repair_offset + chunk_size])
        state.repair_offset += chunk_size
        return Message(MessageType.SR1B_REPAIR, sender_id=state.id, neighbor_ids=chunk)

    def _msg_sr1c(self):
        state = self.state
        return Message(MessageType.SR1C_COUNT, sender_id=state.id,
                       neighbor_count=min(len(state.neighbors), 255), position=int(state.my_position))

    def _msg_token(self):
        state = self.state
        if state.my_position == PositionGroup.CORNER:
            if not state.origin_candidate:
                return None
            return Message(MessageType.SR2A_TOKEN, token=state.origin_token)
        if state.relay_token is None:
            return None
        return Message(MessageType.SR2A_TOKEN, token=state.relay_token)

    def _msg_axes(self):
        return self.axes_message

    def _msg_count(self):
        state = self.state
        if not state.my_count:
            return None
        kind = MessageType.SR2B_COUNT_NEARCORNER if state.near_corner else MessageType.SR2B_COUNT
        return Message(kind, count=state.my_count, c1=state.c1, c2=state.c2, c3=state.c3,
                       position=int(state.my_position))

    def _msg_totals(self):
        state = self.state
        if not state.totals_known or not state.my_count:
            return None
        return Message(MessageType.SR2B_TOTALS, sender_count=state.my_count, total=state.total_count,
                       c1=state.c1, c2=state.c2, c3=state.c3)

    def _msg_coord(self):
        state = self.state
        if not (state.coord[0] or state.coord[1]):
            return None
        return Message(MessageType.SR2C_COORD, sender_id=state.id, x=state.coord[0], y=state.coord[1],
                       width=state.width, height=state.height)

    _BUILDERS = {
        Phase.SR1A_P1: _msg_sr1a_id,
        Phase.SR1A_P2: _msg_sr1a_relay,
        Phase.SR1B_P2: _msg_sr1a_id,
        Phase.SR1B_REPAIR: _msg_repair,
        Phase.SR1C: _msg_sr1c,
        Phase.SR2A_ELECT: _msg_token,
        Phase.SR2A_AXES: _msg_axes,
        Phase.SR2B_COUNT: _msg_count,
        Phase.SR2B_DISTRIBUTE: _msg_totals,
        Phase.SR2C: _msg_coord,
    }

    # --- обработка ---

    def _dispatch(self, msg, distance):
        state = self.state
        phase = state.phase
        kind = msg.type

        if phase in (Phase.SR1A_P1, Phase.SR1A_P2):
            if phase == Phase.SR1A_P2:
                record_min_distance(state, distance)
            sr1a_handle(state, msg, self.rng)
        elif phase == Phase.SR1B_P2:
            if kind in (MessageType.SR1A_ID, MessageType.SR1A_RELAY):
                sr1b_filter(state, msg, distance)
        elif phase == Phase.SR1B_REPAIR:
            if kind == MessageType.SR1B_REPAIR and self.repair_enabled:
                sr1b_repair(state, msg, distance)
        elif kind == MessageType.SR1C_COUNT:
            record_neighbor_count(state, msg)
        elif phase == Phase.SR2A_ELECT:
            sr2a_elect(state, msg)
        elif phase == Phase.SR2A_AXES and kind == MessageType.SR2A_AXES:
            sr2a_axes_handle(state, msg)
        elif phase == Phase.SR2B_COUNT and kind in (MessageType.SR2B_COUNT, MessageType.SR2B_COUNT_NEARCORNER):
            sr2b_count_step(state, msg, distance)
            if state.is_origin and state.total_count:
                self.sync_advance(Phase.SR2B_DISTRIBUTE)
        elif phase == Phase.SR2B_DISTRIBUTE and kind == MessageType.SR2B_TOTALS:
            sr2b_distribute(state, msg)
            if state.is_origin and state.totals_returned:
                width, height, population = swarm_dimensions(state.c1, state.c2, state.c3, state.total_count)
                logger.info(f"Начало координат: размеры роя {width}x{height}, {population} агентов")
                self.sync_advance(Phase.SR2C)
        elif phase >= Phase.SR2C and kind == MessageType.SR2C_COORD:
            coord_handle(state, msg)

    def _exit_phase(self, phase):
        state = self.state
        if phase == Phase.SR1A_P2:
            state.radius = neighborhood_radius(state.min_msg_distance, self.radius_eps)
        elif phase == Phase.SR1B_P2:
            sr1b_prune(state)
        elif phase == Phase.SR1C and not state.fault:
            finalize_position(state)
            logger.debug(f"ID {state.id}: {len(state.neighbors)} соседей, позиция {state.my_position.name}")
        elif phase == Phase.SR2A_ELECT and not state.fault:
            decide_origin(state)

    def _enter_phase(self, phase):
        state = self.state
        try:
            if phase == Phase.SR1A_P2:
                state.nonce = int(self.rng.integers(0, 256))
            elif phase == Phase.SR2A_ELECT and state.my_position == PositionGroup.CORNER:
                state.origin_candidate = True
                state.origin_token = draw_origin_token(self.rng)
            elif phase == Phase.SR2A_AXES and state.is_origin:
                self.axes_message = sr2a_assign_axes(state)
            elif phase == Phase.SR2C and not state.fault:
                assign_border_coords(state)
            elif phase >= R3_BASE:
                self._enter_r3_step(phase - R3_BASE)
        except SwarmError as e:
            self._fail(e)

    def _enter_r3_step(self, step):
        state = self.state
        if state.role == Role.DEPARTED:
            return
        if self.plan is None or not state.coord_assigned or not state.width:
            state.role = Role.OFF
            return
        state.role = r3_role(self.plan, state.coord, (state.width, state.height), step)
        if state.role == Role.DEPARTED:
            state.departed_tick = state.local_tick

    def _fail(self, error):
        if self.state.fault:
            return
        self.state.fault = error.code
        level = logging.WARNING if isinstance(error, (FullBlacklistError, CountInconsistentError)) else logging.ERROR
        logger.log(level, f"Агент {self.index} (ID {self.state.id}) в FAULT: {error}")
