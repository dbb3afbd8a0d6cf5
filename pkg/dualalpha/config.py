# dualalpha/config.py
import logging
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict

log = logging.getLogger(__name__)


class Settings(BaseSettings):
    """
    Centralized configuration for dualalpha.
    Loads values automatically from DUALALPHA_* environment variables or a .env file.
    """

    # ---------- Tolerances ----------
    EPS_C_REL: float = 1e-9  # bound check: c* <= c1 + EPS_C_REL * (1 + |c1|)
    EPS_FEAS: float = 1e-12  # sign feasibility of multipliers outside J
    EPS_PIVOT_REL: float = 1e-10  # Cholesky pivot threshold, relative to max diag(B)
    EPS_OPT_REL: float = 1e-10  # dual gradient optimality, relative to max(max|U|, max diag(B))
    GRAPH_SLACK_REL: float = 1e-12  # tangency slack for ball intersection
    WEIGHT_SLACK: float = 1e-9  # absolute slack for weight monotonicity checks

    # ---------- Build ----------
    THREADS: int = 1
    SHOW_PROGRESS: bool = False
    GRAPH_METHOD: Literal["pairwise", "kdtree"] = "pairwise"

    # ---------- Homology ----------
    DEFAULT_PRIME: int = 2

    # ---------- Oracle ----------
    ORACLE_MAX_POINTS: int = 25
    PRIMAL_MAX_CONSTRAINTS: int = 24

    # ---------- Logging ----------
    LOG_LEVEL: str = "INFO"

    # ---------- Model Config ----------
    model_config = SettingsConfigDict(
        env_prefix="DUALALPHA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Instantiate global settings
settings = Settings()

# ---------- Safety Check ----------
if settings.EPS_C_REL > 1e-6:
    log.warning("EPS_C_REL=%g is loose; simplices near the cutoff may be accepted spuriously.", settings.EPS_C_REL)

if settings.THREADS < 1:
    log.warning("THREADS=%d is invalid; builds will fall back to a single thread.", settings.THREADS)
