"""
Истинный мир: размещение агентов на решётке, истинная смежность
и проверка назначенных координат с точностью до симметрии.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from lattice_math import classify_position, neighborhood_radius, spacing_feasible
from swarm_errors import EpsOutOfRangeError, InvalidSpecError

logger = logging.getLogger(__name__)


class Topology(Enum):
    RECTANGULAR = "rectangular"
    HEXAGONAL = "hexagonal"


@dataclass(frozen=True)
class LatticeSpec:
    topology: Topology = Topology.RECTANGULAR
    cols: int = 5
    rows: int = 5
    row_lengths: tuple = ()     # только для HEXAGONAL, снизу вверх
    dx: float = 35.0
    dy: float = 35.0
    jitter_eps: float = 0.0

    @property
    def n_agents(self):
        if self.topology == Topology.HEXAGONAL:
            return sum(self.row_lengths)
        return self.cols * self.rows

    @property
    def min_spacing(self):
        return min(self.dx, self.dy)

    def validate(self):
        if self.dx <= 0 or self.dy <= 0:
            raise InvalidSpecError(f"шаг решётки должен быть положительным: dx={self.dx}, dy={self.dy}")
        if self.jitter_eps < 0:
            raise InvalidSpecError(f"jitter_eps={self.jitter_eps} < 0")

        if self.topology == Topology.HEXAGONAL:
            if len(self.row_lengths) < 3 or min(self.row_lengths) < 2:
                raise InvalidSpecError(f"гексагональной решётке нужно >= 3 рядов по >= 2 агента: {self.row_lengths}")
            return

        if self.cols < 3 or self.rows < 3:
            raise InvalidSpecError(f"решётка {self.cols}x{self.rows} меньше 3x3")
        try:
            feasible = spacing_feasible(self.dx, self.dy, self.jitter_eps)
        except EpsOutOfRangeError as e:
            raise InvalidSpecError(f"jitter_eps вне допустимого диапазона ({e})") from e
        if not feasible:
            raise InvalidSpecError(f"шаги {self.dx}x{self.dy} мм недопустимы при jitter_eps={self.jitter_eps}")


@dataclass
class GroundTruth:
    spec: LatticeSpec
    positions: np.ndarray
    ideal_positions: np.ndarray
    adjacency: list
    display_cells: list
    display_size: tuple
    true_coord: list = field(default=None)

    @property
    def n_agents(self):
        return len(self.adjacency)

    def degrees(self):
        return [len(neighbors) for neighbors in self.adjacency]


# ============================================
# ГЕНЕРАЦИЯ
# ============================================

def _rectangular_layout(spec):
    cells = [(col, row) for row in range(spec.rows) for col in range(spec.cols)]
    ideal = np.array([(col * spec.dx, row * spec.dy) for col, row in cells], dtype=float)
    index = {cell: i for i, cell in enumerate(cells)}
    adjacency = []
    for col, row in cells:
        neighbors = set()
        for dc in (-1, 0, 1):
            for dr in (-1, 0, 1):
                other = index.get((col + dc, row + dr))
                if (dc or dr) and other is not None:
                    neighbors.add(other)
        adjacency.append(frozenset(neighbors))
    true_coord = [(col + 1, row + 1) for col, row in cells]
    return ideal, adjacency, cells, (spec.cols, spec.rows), true_coord


def _hex_offsets(row_lengths, dx):
    longest = max(row_lengths)
    if all(abs(a - b) == 1 for a, b in zip(row_lengths, row_lengths[1:])):
        return [(longest - length) * dx / 2 for length in row_lengths]
    return [dx / 2 if j % 2 else 0.0 for j in range(len(row_lengths))]


def _hexagonal_layout(spec):
    offsets = _hex_offsets(spec.row_lengths, spec.dx)
    points, rows = [], []
    for j, length in enumerate(spec.row_lengths):
        for k in range(length):
            points.append((offsets[j] + k * spec.dx, j * spec.dy))
            rows.append(j)
    ideal = np.array(points, dtype=float)

    tolerance = 1e-6 * spec.dx
    adjacency = []
    for i, (x, _) in enumerate(points):
        neighbors = set()
        for k, (other_x, _) in enumerate(points):
            if k == i:
                continue
            gap = abs(other_x - x)
            if rows[k] == rows[i] and abs(gap - spec.dx) < tolerance:
                neighbors.add(k)
            elif abs(rows[k] - rows[i]) == 1 and gap <= spec.dx / 2 + tolerance:
                neighbors.add(k)
        adjacency.append(frozenset(neighbors))

    # половина шага - одна колонка кадра
    cells = [(int(round(2 * x / spec.dx)), rows[i]) for i, (x, _) in enumerate(points)]
    size = (max(c for c, _ in cells) + 1, len(spec.row_lengths))
    return ideal, adjacency, cells, size, None


def generate(spec, rng):
    """Размещает агентов по решётке (по строкам снизу вверх) и добавляет ошибку размещения"""
    spec.validate()
    if spec.topology == Topology.HEXAGONAL:
        ideal, adjacency, cells, size, true_coord = _hexagonal_layout(spec)
    else:
        ideal, adjacency, cells, size, true_coord = _rectangular_layout(spec)

    positions = ideal.copy()
    if spec.jitter_eps > 0:
        n = len(ideal)
        radius = spec.jitter_eps * spec.min_spacing
        r = radius * np.sqrt(rng.random(n))
        theta = 2 * np.pi * rng.random(n)
        positions += np.column_stack((r * np.cos(theta), r * np.sin(theta)))

    logger.debug(f"Решётка {spec.topology.value}: {len(ideal)} агентов")
    return GroundTruth(spec, positions, ideal, adjacency, cells, size, true_coord)


def check_comm_range(spec, comm_range, radius_eps=None):
    """Радиус соседства при минимальном шаге должен помещаться в дальность связи"""
    r = neighborhood_radius(spec.min_spacing, radius_eps)
    if r > comm_range:
        raise InvalidSpecError(f"радиус соседства {r:.1f} мм больше дальности связи {comm_range:.1f} мм")
    return r


# ============================================
# СИММЕТРИИ И ПРОВЕРКА
# ============================================

SYMMETRIES = (
    "identity", "mirror_x", "mirror_y", "rot180",
    "transpose", "rot90", "rot270", "anti_transpose",
)

# Симметрии, меняющие местами оси (размеры m x n -> n x m)
AXIS_SWAPPING = frozenset({"transpose", "rot90", "rot270", "anti_transpose"})


def dihedral_transform(name, m, n):
    """Преобразование координат решётки m x n по имени симметрии"""
    transforms = {
        "identity": lambda x, y: (x, y),
        "mirror_x": lambda x, y: (m + 1 - x, y),
        "mirror_y": lambda x, y: (x, n + 1 - y),
        "rot180": lambda x, y: (m + 1 - x, n + 1 - y),
        "transpose": lambda x, y: (y, x),
        "rot90": lambda x, y: (n + 1 - y, x),
        "rot270": lambda x, y: (y, m + 1 - x),
        "anti_transpose": lambda x, y: (n + 1 - y, m + 1 - x),
    }
    f = transforms[name]
    return lambda coord: f(coord[0], coord[1])


def symmetry_dims(spec, name):
    """Размеры роя в системе координат агентов для данной симметрии"""
    if name in AXIS_SWAPPING:
        return spec.rows, spec.cols
    return spec.cols, spec.rows


@dataclass
class VerifyResult:
    passed: bool
    symmetry: str = ""
    mismatch_agent: int | None = None
    details: str = ""


def verify_coords(assigned, truth):
    """PASS, если assigned = tau(true_coord) для одной из 8 симметрий"""
    if truth.true_coord is None:
        return VerifyResult(False, details="у гексагональной решётки нет координат")
    spec = truth.spec
    best = None
    for name in SYMMETRIES:
        tau = dihedral_transform(name, spec.cols, spec.rows)
        mismatches = [i for i, coord in enumerate(truth.true_coord) if tuple(assigned[i]) != tau(coord)]
        if not mismatches:
            return VerifyResult(True, symmetry=name)
        if best is None or len(mismatches) < len(best[1]):
            best = (name, mismatches)

    name, mismatches = best
    first = mismatches[0]
    tau = dihedral_transform(name, spec.cols, spec.rows)
    return VerifyResult(
        False,
        symmetry=name,
        mismatch_agent=first,
        details=(f"ближайшая симметрия {name}: {len(mismatches)} несовпадений, агент {first} "
                 f"имеет {tuple(assigned[first])}, ожидалось {tau(truth.true_coord[first])}"),
    )


def expected_group_counts(spec):
    """(углы, границы, середина) для прямоугольной решётки"""
    if spec.topology != Topology.RECTANGULAR:
        raise InvalidSpecError("формула групп определена только для прямоугольной решётки")
    m, n = spec.cols, spec.rows
    return 4, 2 * (m + n) - 8, (m - 2) * (n - 2)


def expected_groups(truth):
    """Истинная группа позиции каждого агента по истинной смежности"""
    degrees = truth.degrees()
    return [
        classify_position(degrees[i], [degrees[k] for k in neighbors])
        for i, neighbors in enumerate(truth.adjacency)
    ]


def corner_name(truth, agent_index):
    """Имя истинного угла, в котором стоит агент"""
    if truth.true_coord is None:
        return "none"
    m, n = truth.spec.cols, truth.spec.rows
    return {
        (1, 1): "bottom_left",
        (m, 1): "bottom_right",
        (1, n): "top_left",
        (m, n): "top_right",
    }.get(truth.true_coord[agent_index], "none")


def pairwise_distances(points):
    """Матрица евклидовых расстояний"""
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))

