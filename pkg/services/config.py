"""
Attack Tree Checker - Configuration and Logging
Environment-driven defaults, per-run settings snapshots, logging setup
"""

import logging
import os
from dataclasses import dataclass, replace
from typing import Optional

from models.errors import ConfigurationError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _env_int(name: str, default: Optional[int], minimum: int = 0) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
    return value


class CheckerConfig:
    """Configuration class for the checker engines"""

    SERVICE_NAME = "Attack Tree Checker"
    VERSION = "1.0.0"

    # AND witness search is exponential in the arity; the cap keeps it explicit
    DEFAULT_MAX_AND_ARITY = 4

    # truth-table ground truth for the SAT bridge
    MAX_TRUTH_TABLE_VARIABLES = 20

    ENGINES = ("exact", "oracle")

    @classmethod
    def max_and_arity(cls) -> int:
        return _env_int("ATC_MAX_AND_ARITY", cls.DEFAULT_MAX_AND_ARITY, minimum=1)

    @classmethod
    def over_and_budget(cls) -> Optional[int]:
        return _env_int("ATC_OVER_AND_BUDGET", None, minimum=1)

    @classmethod
    def oracle_budget(cls) -> Optional[int]:
        return _env_int("ATC_ORACLE_BUDGET", None)

    @classmethod
    def jobs(cls) -> int:
        return _env_int("ATC_JOBS", 1, minimum=1)

    @classmethod
    def log_level(cls, default: str = "WARNING") -> str:
        return os.getenv("ATC_LOG_LEVEL", default).upper()

    @classmethod
    def log_file(cls) -> Optional[str]:
        return os.getenv("ATC_LOG_FILE") or None


@dataclass(frozen=True)
class CheckerSettings:
    """Immutable per-run snapshot handed to the engines"""

    max_and_arity: int = CheckerConfig.DEFAULT_MAX_AND_ARITY
    over_and_budget: Optional[int] = None
    oracle_budget: Optional[int] = None
    jobs: int = 1

    @classmethod
    def from_env(cls, **overrides) -> "CheckerSettings":
        settings = cls(
            max_and_arity=CheckerConfig.max_and_arity(),
            over_and_budget=CheckerConfig.over_and_budget(),
            oracle_budget=CheckerConfig.oracle_budget(),
            jobs=CheckerConfig.jobs(),
        )
        return settings.with_overrides(**overrides)

    def with_overrides(self, **overrides) -> "CheckerSettings":
        values = {k: v for k, v in overrides.items() if v is not None}
        if values.get("max_and_arity", 1) < 1:
            raise ConfigurationError("max_and_arity must be >= 1")
        return replace(self, **values)


DEFAULT_SETTINGS = CheckerSettings()


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Route logs to stderr (stdout carries reports) and optionally a file"""
    level_name = (level or CheckerConfig.log_level()).upper()
    numeric = getattr(logging, level_name, None)
    if not isinstance(numeric, int):
        raise ConfigurationError(f"Unknown log level: {level_name!r}")

    handlers = [logging.StreamHandler()]
    log_file = log_file or CheckerConfig.log_file()
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(level=numeric, format=LOG_FORMAT, handlers=handlers, force=True)
