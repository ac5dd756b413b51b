import os
from dotenv import load_dotenv

# Загрузка переменных окружения
# Используем абсолютный путь к файлу .env
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
env_path = os.path.join(BASE_DIR, ".env")
load_dotenv(env_path, override=True)

# ============================================
# ТАЙМЕРЫ ПРОТОКОЛА (в kilo_ticks, ~32 в секунду)
# ============================================

PROTOCOL_TIMERS = {
    "time_limit_1": 300,   # конец 1-й фазы SR1a
    "time_limit_2": 800,   # конец 2-й фазы SR1a (и 1-й фазы SR1b)
    "time_limit_3": 1600,  # конец SR1b (вместе с фазой ремонта)
    "time_limit_4": 400,   # окно выборов начала координат SR2a (~25 сообщений)
    "repair_delay": 160,   # ремонт начинается через 5 с после time_limit_2
    "sr1c_ticks": 320,     # обмен числом соседей и классификация
    "axes_ticks": 160,     # рассылка осей от начала координат
    "sr2c_ticks": 960,     # назначение координат внутренним роботам
}

# ============================================
# ПАРАМЕТРЫ ПРОТОКОЛА
# ============================================

PROTOCOL_SETTINGS = {
    "id_space": 256,                 # локальные ID 0..255
    "robot_body_length": 33.0,       # мм, меньшие расстояния отбрасываются
    "min_distance_init": 255.0,      # начальное значение min_msg_distance
    "radius_slope": 1.5,             # r = 1.5x + 10
    "radius_offset": 10.0,
    "hex_radius_eps_max": 0.5,       # r = (1 + eps)x допустим при eps < 0.5
    "neighbor_min_samples": 2,        # оценок расстояния, чтобы соседа можно было отсеять по медиане
    "repair_chunk": 7,               # ID соседей в одном сообщении ремонта
    "origin_count_threshold": 3,     # (1,2) и начало координат принимают счёт > 3
    "departure_delay_ticks": 64,     # DEPARTED перестаёт передавать через 2 с
}

# ============================================
# НАСТРОЙКИ СИМУЛЯТОРА
# ============================================

SIM_DEFAULTS = {
    "seed": 1,
    "comm_range": float(os.getenv("SWARM_COMM_RANGE_MM", 100.0)),  # ~10 см у Kilobot
    "msg_rate": 2.0,        # сообщений в секунду на агента
    "tick_rate": 32,        # kilo_ticks в секунду
    "max_sim_seconds": float(os.getenv("SWARM_MAX_SIM_SECONDS", 900.0)),
    "repair_enabled": True,
    "frames_every": 0,      # 0 = кадры не сохраняются
    "step_seconds": 8.0,    # длительность шага плана R3 по умолчанию
}

# Шумовая модель по умолчанию (всё по нулям = бесшумный мир)
NOISE_DEFAULTS = {
    "drop_prob": 0.0,
    "dist_noise_sigma": 0.0,
    "dist_noise_bias": 0.0,
    "clock_skew_frac": 0.0,
    "bias_frac": 0.0,       # доля агентов с систематической ошибкой расстояния
    "bias_mm": 15.0,        # величина этой ошибки ("repair-stress")
}

# ============================================
# ПУТИ К ФАЙЛАМ
# ============================================

PATHS = {
    "log_dir": "logs",
    "out_dir": os.getenv("SWARM_OUT_DIR", "out"),
    "scenario_dir": os.path.join(BASE_DIR, "scenarios"),
    "plan_dir": os.path.join(BASE_DIR, "plans"),
}

# ============================================
# ЛОГИРОВАНИЕ И ЗАПУСК
# ============================================

LOG_SETTINGS = {
    "log_file": os.getenv("SWARM_LOG_FILE", "swarm_sim.log"),
    "log_level": os.getenv("SWARM_LOG_LEVEL", "INFO"),  # DEBUG, INFO, WARNING, ERROR
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
}

BATCH_SETTINGS = {
    "workers": int(os.getenv("SWARM_WORKERS", 1)),
}

# Коды завершения CLI
EXIT_CODES = {
    "ok": 0,
    "fail": 1,
    "timeout": 2,
    "usage": 64,
}

# Экспорт настроек
__all__ = [
    "PROTOCOL_TIMERS",
    "PROTOCOL_SETTINGS",
    "SIM_DEFAULTS",
    "NOISE_DEFAULTS",
    "PATHS",
    "LOG_SETTINGS",
    "BATCH_SETTINGS",
    "EXIT_CODES",
]
