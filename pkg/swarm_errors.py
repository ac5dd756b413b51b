class SwarmError(Exception):
    """Базовая ошибка симулятора. code - машинный код ошибки"""

    code = "SWARM_ERROR"

    def __init__(self, message="", code=None):
        if code:
            self.code = code
        super().__init__(f"{self.code}: {message}" if message else self.code)


class FullBlacklistError(SwarmError):
    code = "FULL_BLACKLIST"


class EpsOutOfRangeError(SwarmError):
    code = "EPS_OUT_OF_RANGE"


class OriginDegenerateError(SwarmError):
    code = "ORIGIN_DEGENERATE"


class CountInconsistentError(SwarmError):
    code = "COUNT_INCONSISTENT"


class InvalidSpecError(SwarmError):
    code = "INVALID_SPEC"


class PlanParseError(SwarmError):
    """Ошибка разбора файла плана (с номером строки)"""

    code = "PARSE_ERROR"

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class ScenarioError(SwarmError):
    code = "SCENARIO_ERROR"

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
