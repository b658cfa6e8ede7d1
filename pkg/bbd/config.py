import logging
import os
import sys

import structlog
from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()

logger = structlog.get_logger("bbd")


class Settings(BaseModel):
    api_key: str = os.getenv("API_KEY", "change-me")

    # Worker processes for batch experiments
    threads: int = int(os.getenv("BBD_THREADS", "1"))

    # Exact cycle solvers refuse digraphs with a above this (2a <= 28)
    solver_max_half_order: int = int(os.getenv("BBD_SOLVER_CAP", "14"))
    # Subset-DP states kept before handing over to branch-and-bound
    dp_state_limit: int = int(os.getenv("BBD_DP_STATE_LIMIT", "2000000"))

    # Generator defaults
    default_seed: int = int(os.getenv("BBD_SEED", "1"))
    default_arc_probability: float = float(os.getenv("BBD_ARC_PROB", "0.75"))
    default_max_attempts: int = int(os.getenv("BBD_MAX_ATTEMPTS", "50"))
    default_repair_iterations: int = int(os.getenv("BBD_REPAIR_ITERATIONS", "400"))

    bypass_cycles_per_instance: int = int(os.getenv("BBD_BYPASS_CYCLES", "20"))

    log_level: str = os.getenv("BBD_LOG_LEVEL", "INFO")
    strict_config: bool = os.getenv("STRICT_CONFIG", "0") == "1"


settings = Settings()


def configure_logging(level: str | None = None) -> None:
    """Send structlog output to stderr; stdout is reserved for command payloads."""
    name = (level or settings.log_level).upper()
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(getattr(logging, name, logging.INFO)),
        logger_factory=structlog.PrintLoggerFactory(sys.stderr),
        cache_logger_on_first_use=False,
    )


def validate_config(serving: bool = False) -> None:
    errors = []
    if serving and (not settings.api_key or settings.api_key == "change-me"):
        errors.append("API_KEY must be set to a secure value")
    if settings.threads < 1:
        errors.append("BBD_THREADS must be at least 1")
    if not 1 <= settings.solver_max_half_order <= 14:
        errors.append("BBD_SOLVER_CAP must lie in [1, 14]")
    if not 0.0 <= settings.default_arc_probability <= 1.0:
        errors.append("BBD_ARC_PROB must lie in [0, 1]")
    if settings.default_max_attempts < 1:
        errors.append("BBD_MAX_ATTEMPTS must be at least 1")
    if errors:
        if settings.strict_config:
            raise RuntimeError("Configuration error: " + "; ".join(errors))
        for e in errors:
            logger.warning("config_warning", warning=e)
