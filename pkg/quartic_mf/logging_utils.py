"""Responsibility: Configure and expose the shared file-backed project logger."""

import logging  # Python logging framework for structured file logs.
import os  # Apply restrictive file permissions to log output.
from pathlib import Path

from .config import LOG_PATH  # Central path where run logs are written.

LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"


def setup_logger(path: Path = LOG_PATH) -> logging.Logger:
    logger = logging.getLogger("quartic-mf")
    logger.setLevel(logging.INFO)
    if logger.handlers:
        return logger

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        handler: logging.Handler = logging.FileHandler(path)
    except OSError:
        # Read-only home (CI sandboxes): keep running with stderr only.
        handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    try:
        os.chmod(path, 0o600)
    except OSError as exc:
        logger.debug("Could not chmod log path=%s err=%s", path, exc)
    return logger


def enable_console(logger: logging.Logger, level: int = logging.INFO) -> None:
    """Mirror log records to stderr (used by the CLI --verbose flag)."""
    for handler in logger.handlers:
        if getattr(handler, "_qmf_console", False):
            handler.setLevel(level)
            return
    console = logging.StreamHandler()
    console.setLevel(level)
    console.setFormatter(logging.Formatter(LOG_FORMAT))
    console._qmf_console = True  # type: ignore[attr-defined]
    logger.addHandler(console)


def kv(**fields: object) -> str:
    """Render fields as `key=value` pairs in call order."""
    return " ".join(f"{key}={value}" for key, value in fields.items())


LOGGER = setup_logger()
