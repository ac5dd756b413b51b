"""
Чистые функции протокола: радиус соседства, допустимость шага решётки,
классификация позиции, координаты по счёту границы, вывод координат
внутренних роботов и размеры роя.
"""
import math

from config import PROTOCOL_SETTINGS
from swarm_errors import CountInconsistentError, EpsOutOfRangeError

# Коды групп позиции (совпадают с kilobot_agent.PositionGroup)
UNKNOWN, CORNER, BORDER, MIDDLE, FAULT = 0, 1, 2, 3, 4


def neighborhood_radius(min_dist, eps=None):
    """r = 1.5x + 10 (мм); с eps - r = (1 + eps)x для гексагональной решётки"""
    if eps is None:
        return PROTOCOL_SETTINGS["radius_slope"] * min_dist + PROTOCOL_SETTINGS["radius_offset"]
    if not 0 <= eps < PROTOCOL_SETTINGS["hex_radius_eps_max"]:
        raise EpsOutOfRangeError(f"radius_eps={eps} вне [0, {PROTOCOL_SETTINGS['hex_radius_eps_max']})")
    return (1 + eps) * min_dist


def spacing_bound(x, eps):
    """Верхняя граница y для шага x при ошибке размещения eps"""
    if eps < 0:
        raise EpsOutOfRangeError(f"eps={eps} < 0")
    radicand = 3 * eps ** 2 - 10 * eps + 3
    if radicand <= 0:
        raise EpsOutOfRangeError(f"eps={eps}: 3e^2-10e+3 = {radicand:.4f} <= 0")
    return x * math.sqrt(radicand) / math.sqrt(eps ** 2 + 2 * eps + 1)


def spacing_feasible(x, y, eps=0.0):
    """Выполняется ли строгое неравенство y < bound(x, eps) (x <= y, иначе меняем местами)"""
    if x > y:
        x, y = y, x
    if x <= 0:
        raise ValueError("шаг решётки должен быть положительным")
    return y < spacing_bound(x, eps)


def radius_anisotropy_limit(x):
    """Наибольший y, при котором диагональ ещё внутри r = 1.5x + 10"""
    r = neighborhood_radius(x)
    return math.sqrt(r * r - x * x)


def classify_position(my_count, neighbor_counts):
    """Группа позиции по числу соседей и числам соседей у соседей.

    CORNER - меньше, чем у любого соседа; MIDDLE - не меньше максимума
    соседства; иначе BORDER. Без соседей - FAULT.
    """
    counts = list(neighbor_counts)
    if my_count == 0 or not counts:
        return FAULT
    if my_count < min(counts):
        return CORNER
    if my_count >= max(counts):
        return MIDDLE
    return BORDER


def corner_border_coords(my_count, c1, c2, c3):
    """Координаты CORNER/BORDER робота по его номеру на обходе границы"""
    if my_count < 1 or not (c1 < c2 < c3):
        raise CountInconsistentError(f"my_count={my_count}, C=({c1},{c2},{c3})")

    if my_count <= c1:
        coord = (my_count, 1)
    elif my_count <= c2:
        coord = (c1, my_count - c1 + 1)
    elif my_count <= c3:
        coord = (c1 + c2 - my_count, c2 - c1 + 1)
    else:
        coord = (1, c2 + c3 - c1 - my_count + 1)

    x, y = coord
    if not (1 <= x <= c1 and 1 <= y <= c2 - c1 + 1):
        raise CountInconsistentError(f"my_count={my_count} вне решётки {c1}x{c2 - c1 + 1}")
    return coord


def infer_middle_coord(neighbor_coords):
    """Вывод координат MIDDLE робота по координатам соседей.

    Возвращает (x, y), где 0 - ось ещё не определена. Ось назначается,
    если у соседей встречаются три подряд идущих значения v-1, v, v+1.
    Нулевые значения (ось соседа неизвестна) пропускаются.
    """
    result = []
    for axis in (0, 1):
        values = {coord[axis] for coord in neighbor_coords if coord[axis] > 0}
        found = 0
        for v in sorted(values):
            if v - 1 in values and v + 1 in values:
                found = v
                break
        result.append(found)
    return tuple(result)


def swarm_dimensions(c1, c2, c3, total_count):
    """(ширина, высота, население) по локальным счётам углов"""
    width = c1
    height = c2 - c1 + 1
    if c3 - c2 + 1 != width or total_count != 2 * (width + height) - 4 or width < 3 or height < 3:
        raise CountInconsistentError(f"C=({c1},{c2},{c3}), total={total_count}")
    return width, height, width * height


def perimeter_walk(width, height):
    """Обход границы против часовой стрелки от (1,1): список координат"""
    walk = [(x, 1) for x in range(1, width + 1)]
    walk += [(width, y) for y in range(2, height + 1)]
    walk += [(x, height) for x in range(width - 1, 0, -1)]
    walk += [(1, y) for y in range(height - 1, 1, -1)]
    return walk


def corner_counts(width, height):
    """(C1, C2, C3) для решётки width x height"""
    return width, width + height - 1, 2 * width + height - 2
