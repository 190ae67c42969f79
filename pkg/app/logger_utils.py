import logging
import sys
import traceback
from logging.handlers import RotatingFileHandler
from pathlib import Path
from .common import get_app_directory

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
LOG_FILE_NAME = "p3t.log"
ERROR_LOG_FILE_NAME = "p3t_errors.log"


class _ErrorFormatter(logging.Formatter):
    """Ensure every error-level record includes traceback or stack trace."""

    def format(self, record: logging.LogRecord) -> str:
        base = super().format(record)
        parts = [base]

        if record.exc_info:
            try:
                parts.append(self.formatException(record.exc_info))
            except Exception:
                # Formatting errors must not break logging
                pass
        elif record.stack_info:
            try:
                parts.append(self.formatStack(record.stack_info))
            except Exception:
                pass

        return "\n".join(part for part in parts if part)


class _ErrorFileHandler(RotatingFileHandler):
    """Dedicated handler for errors that always persists tracebacks."""

    def emit(self, record: logging.LogRecord):
        if record.levelno < logging.ERROR:
            return

        error_record = logging.makeLogRecord(record.__dict__.copy())

        if error_record.exc_info in (None, (None, None, None)):
            current_exc = sys.exc_info()
            if current_exc != (None, None, None):
                error_record.exc_info = current_exc

        if error_record.exc_info in (None, (None, None, None)):
            error_record.stack_info = "".join(traceback.format_stack())

        super().emit(error_record)


def get_logger(
    name: str = "p3t",
    app_dir: Path | None = None,
    level: str | int | None = None,
    console: bool = False,
):
    """
    Configure and return the named logger.

    Library modules log through children of "p3t" (for example
    "p3t.embedder") and never attach handlers themselves; the CLI calls this
    once so those records reach the rotating files.
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        if level is not None:
            logger.setLevel(level)
        return logger

    logger.setLevel(level if level is not None else logging.INFO)

    app_dir = app_dir or get_app_directory()
    app_dir.mkdir(parents=True, exist_ok=True)

    file_handler = RotatingFileHandler(
        app_dir / LOG_FILE_NAME, maxBytes=512 * 1024, backupCount=3, encoding="utf-8"
    )
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(file_handler)

    error_handler = _ErrorFileHandler(
        app_dir / ERROR_LOG_FILE_NAME,
        maxBytes=512 * 1024,
        backupCount=3,
        encoding="utf-8",
    )
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(_ErrorFormatter(LOG_FORMAT))
    logger.addHandler(error_handler)

    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(logging.Formatter("%(levelname)s | %(message)s"))
        logger.addHandler(console_handler)

    logger.propagate = False
    return logger


def close_logger(name: str = "p3t") -> None:
    """Detach and close every handler of the named logger."""
    logger = logging.getLogger(name)
    for handler in logger.handlers[:]:
        handler.close()
        logger.removeHandler(handler)
