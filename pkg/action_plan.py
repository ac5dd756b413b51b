"""
План ролей R3 и отрисовка кадров.

Грамматика файла плана (построчно, строка с "#" в начале - комментарий):

    step_seconds = 8
    cyclic = true
    step [метка]
    rect X1 Y1 X2 Y2 -> ЦВЕТ|depart|off
    glyph ROW/ROW/... -> ЦВЕТ at X,Y
    stripes x|y ЦВЕТ ЦВЕТ ...
    all -> ЦВЕТ|depart|off

Строки glyph состоят из '#' (горит) и '.', разделяются '/' или пробелами;
X,Y - координата левой верхней клетки, строка r идёт на y = Y - r.
Координата <= 0 отсчитывается от дальнего края: 0 - последний столбец
(строка), -1 - предпоследний. Внутри шага работает первое совпавшее правило.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from config import SIM_DEFAULTS
from swarm_errors import PlanParseError

logger = logging.getLogger(__name__)


class Role(Enum):
    OFF = "off"
    RED = "red"
    GREEN = "green"
    BLUE = "blue"
    CYAN = "cyan"
    MAGENTA = "magenta"
    YELLOW = "yellow"
    WHITE = "white"
    DEPARTED = "depart"

    @property
    def is_lit(self):
        return self not in (Role.OFF, Role.DEPARTED)


ROLE_CHARS = {
    Role.OFF: ".",
    Role.RED: "R",
    Role.GREEN: "G",
    Role.BLUE: "B",
    Role.CYAN: "C",
    Role.MAGENTA: "M",
    Role.YELLOW: "Y",
    Role.WHITE: "W",
    Role.DEPARTED: " ",
}

ROLE_RGB = {
    Role.OFF: (24, 24, 24),
    Role.RED: (230, 40, 40),
    Role.GREEN: (40, 200, 60),
    Role.BLUE: (50, 90, 230),
    Role.CYAN: (40, 210, 210),
    Role.MAGENTA: (210, 50, 210),
    Role.YELLOW: (235, 215, 40),
    Role.WHITE: (245, 245, 245),
    Role.DEPARTED: (0, 0, 0),
}

BACKGROUND_RGB = (0, 0, 0)


def _resolve(value, size):
    return value if value > 0 else size + value


# ============================================
# ПРАВИЛА
# ============================================

@dataclass(frozen=True)
class RectRule:
    x1: int
    y1: int
    x2: int
    y2: int
    role: Role

    def match(self, coord, dims):
        width, height = dims
        x1, x2 = sorted((_resolve(self.x1, width), _resolve(self.x2, width)))
        y1, y2 = sorted((_resolve(self.y1, height), _resolve(self.y2, height)))
        if x1 <= coord[0] <= x2 and y1 <= coord[1] <= y2:
            return self.role
        return None


@dataclass(frozen=True)
class GlyphRule:
    cells: frozenset   # смещения (dx, dy) от якоря, dy <= 0
    anchor_x: int
    anchor_y: int
    role: Role

    def match(self, coord, dims):
        width, height = dims
        dx = coord[0] - _resolve(self.anchor_x, width)
        dy = coord[1] - _resolve(self.anchor_y, height)
        return self.role if (dx, dy) in self.cells else None


@dataclass(frozen=True)
class StripesRule:
    axis: str
    palette: tuple

    def match(self, coord, dims):
        value = coord[0] if self.axis == "x" else coord[1]
        return self.palette[(value - 1) % len(self.palette)]


@dataclass(frozen=True)
class AllRule:
    role: Role

    def match(self, coord, dims):
        return self.role


@dataclass
class PlanStep:
    label: str = ""
    rules: list = field(default_factory=list)


@dataclass
class ActionPlan:
    step_seconds: float = SIM_DEFAULTS["step_seconds"]
    steps: list = field(default_factory=list)
    cyclic: bool = True


# ============================================
# РАЗБОР
# ============================================

def _parse_role(token, line_no, allow_special=True):
    try:
        role = Role(token.lower())
    except ValueError:
        raise PlanParseError(line_no, f"неизвестный цвет '{token}'") from None
    if not allow_special and not role.is_lit:
        raise PlanParseError(line_no, f"'{token}' нельзя использовать здесь")
    return role


def _parse_int(token, line_no):
    try:
        return int(token)
    except ValueError:
        raise PlanParseError(line_no, f"ожидалось целое число, получено '{token}'") from None


def _parse_glyph(body, line_no):
    # glyph ROWS -> COLOR at X,Y
    left, arrow, right = body.partition("->")
    if not arrow:
        raise PlanParseError(line_no, "в правиле glyph нет '->'")
    rows = left.replace("/", " ").split()
    if not rows:
        raise PlanParseError(line_no, "пустой глиф")
    cells = set()
    for r, row in enumerate(rows):
        if set(row) - {"#", "."}:
            raise PlanParseError(line_no, f"строка глифа '{row}' содержит не только '#' и '.'")
        for c, char in enumerate(row):
            if char == "#":
                cells.add((c, -r))

    parts = right.split()
    if len(parts) != 3 or parts[1] != "at":
        raise PlanParseError(line_no, "ожидалось '-> ЦВЕТ at X,Y'")
    anchor = parts[2].split(",")
    if len(anchor) != 2:
        raise PlanParseError(line_no, f"неверный якорь '{parts[2]}'")
    role = _parse_role(parts[0], line_no)
    return GlyphRule(frozenset(cells), _parse_int(anchor[0], line_no), _parse_int(anchor[1], line_no), role)


def _parse_rule(keyword, body, line_no):
    if keyword == "rect":
        left, arrow, right = body.partition("->")
        numbers = left.split()
        if not arrow or len(numbers) != 4 or len(right.split()) != 1:
            raise PlanParseError(line_no, "ожидалось 'rect X1 Y1 X2 Y2 -> ЦВЕТ'")
        x1, y1, x2, y2 = (_parse_int(n, line_no) for n in numbers)
        return RectRule(x1, y1, x2, y2, _parse_role(right.strip(), line_no))

    if keyword == "glyph":
        return _parse_glyph(body, line_no)

    if keyword == "stripes":
        parts = body.split()
        if len(parts) < 2 or parts[0] not in ("x", "y"):
            raise PlanParseError(line_no, "ожидалось 'stripes x|y ЦВЕТ ...'")
        return StripesRule(parts[0], tuple(_parse_role(p, line_no, allow_special=False) for p in parts[1:]))

    if keyword == "all":
        left, arrow, right = body.partition("->")
        if not arrow or left.strip() or len(right.split()) != 1:
            raise PlanParseError(line_no, "ожидалось 'all -> ЦВЕТ'")
        return AllRule(_parse_role(right.strip(), line_no))

    raise PlanParseError(line_no, f"неизвестное правило '{keyword}'")


def parse_plan(text):
    """Разбирает текст плана в ActionPlan"""
    plan = ActionPlan()
    current = None

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        if "=" in line and "->" not in line:
            if current is not None:
                raise PlanParseError(line_no, "настройки плана должны идти до первого step")
            key, _, value = (part.strip() for part in line.partition("="))
            if key == "step_seconds":
                try:
                    plan.step_seconds = float(value)
                except ValueError:
                    raise PlanParseError(line_no, f"step_seconds: '{value}' не число") from None
                if plan.step_seconds <= 0:
                    raise PlanParseError(line_no, "step_seconds должен быть положительным")
            elif key == "cyclic":
                if value.lower() not in ("true", "false"):
                    raise PlanParseError(line_no, "cyclic: ожидалось true или false")
                plan.cyclic = value.lower() == "true"
            else:
                raise PlanParseError(line_no, f"неизвестная настройка '{key}'")
            continue

        keyword, _, body = line.partition(" ")
        if keyword == "step":
            current = PlanStep(label=body.strip())
            plan.steps.append(current)
            continue
        if current is None:
            raise PlanParseError(line_no, "правило до первого step")
        current.rules.append(_parse_rule(keyword, body.strip(), line_no))

    if not plan.steps:
        raise PlanParseError(0, "в плане нет ни одного step")
    logger.debug(f"План разобран: {len(plan.steps)} шагов по {plan.step_seconds} с")
    return plan


def load_plan(path):
    with open(path, encoding="utf-8") as f:
        return parse_plan(f.read())


# ============================================
# РОЛИ
# ============================================

def r3_role(plan, coord, dims, step):
    """Роль агента с координатой coord на шаге step.

    План описан для лежачей решётки (ширина >= высоты). Если выбранные
    оси дали стоячую, x и y меняются местами.
    """
    if not plan.steps or coord[0] < 1 or coord[1] < 1:
        return Role.OFF
    width, height = dims
    if width < height:
        coord, dims = (coord[1], coord[0]), (height, width)
    if step >= len(plan.steps):
        if not plan.cyclic:
            return Role.OFF
        step %= len(plan.steps)
    for rule in plan.steps[step].rules:
        role = rule.match(coord, dims)
        if role is not None:
            return role
    return Role.OFF


def expected_lit(plan, step, dims):
    """Координаты (в системе агентов), которые горят на шаге step"""
    width, height = dims
    return {
        (x, y)
        for x in range(1, width + 1)
        for y in range(1, height + 1)
        if r3_role(plan, (x, y), dims, step).is_lit
    }


def lit_true_coords(roles, truth):
    """Истинные координаты горящих агентов кадра"""
    return {truth.true_coord[i] for i, role in enumerate(roles) if role.is_lit}


# ============================================
# КАДРЫ
# ============================================

def render_ascii(roles, truth):
    """Один символ на агента, строки сверху вниз"""
    width, height = truth.display_size
    grid = [[" "] * width for _ in range(height)]
    for i, (col, row) in enumerate(truth.display_cells):
        grid[row][col] = ROLE_CHARS[roles[i]]
    return "\n".join("".join(line) for line in reversed(grid)) + "\n"


def render_ppm(roles, truth, cell_px=8):
    """Кадр P6: клетка cell_px x cell_px на агента"""
    width, height = truth.display_size
    image = np.zeros((height * cell_px, width * cell_px, 3), dtype=np.uint8)
    image[:, :] = BACKGROUND_RGB
    for i, (col, row) in enumerate(truth.display_cells):
        top = (height - 1 - row) * cell_px
        left = col * cell_px
        # рамка в 1 px разделяет соседние клетки
        image[top + 1:top + cell_px - 1, left + 1:left + cell_px - 1] = ROLE_RGB[roles[i]]
    header = f"P6\n{width * cell_px} {height * cell_px}\n255\n".encode("ascii")
    return header + image.tobytes()


def render_frame(roles, truth, fmt="ascii"):
    if fmt == "ascii":
        return render_ascii(roles, truth)
    if fmt == "ppm":
        return render_ppm(roles, truth)
    raise ValueError(f"неизвестный формат кадра '{fmt}'")
