"""Responsibility: Centralize environment-driven runtime configuration constants."""

import os  # Read QMF_* environment variables.
from pathlib import Path  # Construct state/log/report file paths.


def env_int(name: str, default: int, minimum: int | None = None) -> int:
    """Integer env value; unparsable values fall back to default, then clamp to minimum."""
    raw = os.environ.get(name)
    value = default
    if raw is not None:
        try:
            value = int(raw.strip())
        except ValueError:
            value = default
    if minimum is not None and value < minimum:
        return minimum
    return value


def env_float(name: str, default: float, minimum: float | None = None) -> float:
    raw = os.environ.get(name)
    value = default
    if raw is not None:
        try:
            value = float(raw.strip())
        except ValueError:
            value = default
    if minimum is not None and value < minimum:
        return minimum
    return value


def env_bool(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    normalized = raw.strip().lower()
    if normalized in {"1", "true", "yes", "on"}:
        return True
    if normalized in {"0", "false", "no", "off"}:
        return False
    return default


def env_path(name: str, default: Path) -> Path:
    raw = os.environ.get(name, "").strip()
    return Path(raw).expanduser() if raw else default


DEFAULT_PRIME = env_int("QMF_PRIME", 313, minimum=3)
DEFAULT_SEED = env_int("QMF_SEED", 1, minimum=0)
DEFAULT_THREADS = env_int("QMF_THREADS", os.cpu_count() or 1, minimum=1)
DEFAULT_TIMEOUT_S = env_float("QMF_TIMEOUT_S", 4 * 3600.0, minimum=1.0)
RUN_SLOW = env_bool("QMF_RUN_SLOW", False)
# Row block height for streaming elimination; bounds peak memory of n=12 Ext maps.
ROW_BLOCK = env_int("QMF_ROW_BLOCK", 512, minimum=16)

OUT_DIR = env_path("QMF_OUT_DIR", Path("reports"))
LOG_PATH = env_path("QMF_LOG_PATH", Path.home() / ".local" / "state" / "quartic-mf.log")

SCHEMA_VERSION = "1"
# Products of two residues must fit in int64.
MAX_PRIME = 2**31
