"""
Проверочные наборы: перебором сверяют функции протокола с эталонами.

- perimeter: номера на обходе границы -> координаты для всех решёток 3..40 x 3..40
- middle_closure: вывод координат MIDDLE доходит до истинных на случайных решётках
- radius_sweep: свойства радиуса соседства и границы допустимого шага
- dihedral_closure: verify_coords принимает все 8 симметрий истинной решётки
"""
import logging
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from lattice_math import (
    corner_border_coords,
    corner_counts,
    infer_middle_coord,
    neighborhood_radius,
    perimeter_walk,
    radius_anisotropy_limit,
    spacing_bound,
    swarm_dimensions,
)
from lattice_world import SYMMETRIES, LatticeSpec, dihedral_transform, generate, verify_coords
from swarm_errors import CountInconsistentError, EpsOutOfRangeError

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: str = ""
    seconds: float = 0.0


def perimeter_suite(max_side=40):
    checked = 0
    for m in range(3, max_side + 1):
        for n in range(3, max_side + 1):
            c1, c2, c3 = corner_counts(m, n)
            walk = perimeter_walk(m, n)
            total = 2 * (m + n) - 4
            if len(walk) != total or len(set(walk)) != total:
                return SuiteResult("perimeter", False, f"{m}x{n}: обход границы не биекция")
            for count, expected in enumerate(walk, 1):
                try:
                    got = corner_border_coords(count, c1, c2, c3)
                except CountInconsistentError as e:
                    return SuiteResult("perimeter", False, f"{m}x{n}, счёт {count}: {e}")
                if got != expected:
                    return SuiteResult("perimeter", False, f"{m}x{n}, счёт {count}: {got} != {expected}")
            if swarm_dimensions(c1, c2, c3, total) != (m, n, m * n):
                return SuiteResult("perimeter", False, f"{m}x{n}: неверные размеры роя")
            checked += 1
    return SuiteResult("perimeter", True, f"{checked} решёток")


def close_middles(width, height, border_coords):
    """Итерации вывода координат MIDDLE до неподвижной точки.

    border_coords: {(col, row): coord} для агентов границы (в системе агентов).
    Возвращает {(col, row): coord} для всех клеток; 0 - ось не определена.
    """
    assigned = {(col, row): (0, 0) for col in range(width) for row in range(height)}
    assigned.update(border_coords)
    middles = [cell for cell in assigned if cell not in border_coords]

    changed = True
    while changed:
        changed = False
        snapshot = dict(assigned)
        for col, row in middles:
            neighbor_coords = [
                snapshot[(col + dc, row + dr)]
                for dc in (-1, 0, 1) for dr in (-1, 0, 1)
                if (dc or dr) and (col + dc, row + dr) in snapshot
            ]
            x, y = infer_middle_coord(neighbor_coords)
            current = assigned[(col, row)]
            new = (current[0] or x, current[1] or y)
            if new != current:
                assigned[(col, row)] = new
                changed = True
    return assigned


def middle_closure_suite(lattices=100, seed=7, max_cols=40, max_rows=25):
    rng = np.random.default_rng(seed)
    for number in range(lattices):
        m = int(rng.integers(3, max_cols + 1))
        n = int(rng.integers(3, max_rows + 1))
        name = SYMMETRIES[int(rng.integers(0, len(SYMMETRIES)))]
        tau = dihedral_transform(name, m, n)
        border = {
            (col, row): tau((col + 1, row + 1))
            for col in range(m) for row in range(n)
            if col in (0, m - 1) or row in (0, n - 1)
        }
        assigned = close_middles(m, n, border)
        for (col, row), coord in assigned.items():
            if coord != tau((col + 1, row + 1)):
                return SuiteResult(
                    "middle_closure", False,
                    f"решётка {number}: {m}x{n} ({name}), клетка {(col + 1, row + 1)} -> {coord}",
                )
    return SuiteResult("middle_closure", True, f"{lattices} решёток")


def radius_sweep_suite(x_min=33, x_max=110, extra_eps=(0.35,)):
    notes = []
    ratio_min = math.inf
    for x in range(x_min, x_max + 1):
        r = neighborhood_radius(x)
        if x > 20 and not r < 2 * x:
            return SuiteResult("radius_sweep", False, f"x={x}: 1.5x+10 >= 2x")
        if not math.hypot(x, x) < r:
            return SuiteResult("radius_sweep", False, f"x={x}: диагональ квадратной решётки вне радиуса")

        limit = radius_anisotropy_limit(x)
        y = float(x)
        while y < math.sqrt(3) * x:
            if y < limit and not math.hypot(x, y) < r:
                return SuiteResult("radius_sweep", False, f"x={x}, y={y}: диагональ вне радиуса")
            y += 1.0
        ratio_min = min(ratio_min, limit / x)

        bound0 = spacing_bound(x, 0.0)
        if abs(bound0 - math.sqrt(3) * x) > 1e-9 * bound0:
            return SuiteResult("radius_sweep", False, f"x={x}: граница при eps=0 не равна sqrt(3)x")
        previous = bound0
        for step in range(1, 30):
            bound = spacing_bound(x, step / 100)
            if not bound < previous:
                return SuiteResult("radius_sweep", False, f"x={x}: граница не убывает при eps={step / 100}")
            previous = bound

    for eps in extra_eps:
        try:
            spacing_bound(float(x_min), eps)
            notes.append(f"eps={eps}: в допустимом диапазоне")
        except EpsOutOfRangeError:
            notes.append(f"eps={eps}: EPS_OUT_OF_RANGE")
    notes.append(f"наименьшее допустимое y/x = {ratio_min:.3f}")
    return SuiteResult("radius_sweep", True, "; ".join(notes))


def dihedral_closure_suite(sizes=((3, 3), (5, 5), (25, 8), (4, 7))):
    rng = np.random.default_rng(0)
    for m, n in sizes:
        truth = generate(LatticeSpec(cols=m, rows=n), rng)
        for name in SYMMETRIES:
            tau = dihedral_transform(name, m, n)
            verdict = verify_coords([tau(c) for c in truth.true_coord], truth)
            if not verdict.passed:
                return SuiteResult("dihedral_closure", False, f"{m}x{n}, {name}: {verdict.details}")
    return SuiteResult("dihedral_closure", True, f"{len(sizes)} решёток x 8 симметрий")


SUITES = {
    "perimeter": perimeter_suite,
    "middle_closure": middle_closure_suite,
    "radius_sweep": radius_sweep_suite,
    "dihedral_closure": dihedral_closure_suite,
}


def run_all_suites(eps_values=(0.35,)):
    results = []
    for name, suite in SUITES.items():
        started = time.perf_counter()
        result = suite(extra_eps=eps_values) if name == "radius_sweep" else suite()
        result.seconds = time.perf_counter() - started
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"{name}: {'PASS' if result.passed else 'FAIL'} ({result.details}, {result.seconds:.2f} с)")
        results.append(result)
    return results


def main():
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")
    logger.info("Запуск проверочных наборов...")
    results = run_all_suites()
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
