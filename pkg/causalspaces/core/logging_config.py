"""
Logging configuration for long-running searches and CLI commands
"""
import logging
import sys
from datetime import datetime

from .settings import settings


class CausalFormatter(logging.Formatter):
    """Console formatter with search/CLI context columns"""

    COLORS = {
        "DEBUG": "\033[36m",      # Cyan
        "INFO": "\033[32m",       # Green
        "WARNING": "\033[33m",    # Yellow
        "ERROR": "\033[31m",      # Red
        "CRITICAL": "\033[35m",   # Magenta
        "RESET": "\033[0m",
    }

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record):
        timestamp = datetime.now().strftime("%H:%M:%S.%f")[:-3]

        if self.use_color:
            color = self.COLORS.get(record.levelname, "")
            levelname = f"{color}{record.levelname}{self.COLORS['RESET']}"
        else:
            levelname = record.levelname

        if hasattr(record, "search_context"):
            line = (
                f"🔎 [{timestamp}] {levelname:20} "
                f"SEARCH:{getattr(record, 'search_context', 'unknown'):12} | {record.getMessage()}"
            )
        elif hasattr(record, "cli_context"):
            line = (
                f"⌨️  [{timestamp}] {levelname:20} "
                f"CLI:{getattr(record, 'cli_context', 'unknown'):15} | {record.getMessage()}"
            )
        else:
            line = (
                f"📐 [{timestamp}] {levelname:20} "
                f"{record.name:25} | {record.getMessage()}"
            )
        if record.exc_info:
            line = f"{line}\n{self.formatException(record.exc_info)}"
        return line


def setup_enhanced_logging(level: int | None = None) -> None:
    """Configure the root logger; results go to stdout, so logs go to stderr"""
    effective = settings.log_level if level is None else level

    root_logger = logging.getLogger()
    root_logger.setLevel(effective)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(effective)
    console_handler.setFormatter(CausalFormatter(use_color=sys.stderr.isatty()))
    root_logger.addHandler(console_handler)

    logging.getLogger("causal_search").setLevel(effective)
    logging.getLogger("causal_cli").setLevel(effective)

    # graphviz logs every render at DEBUG
    logging.getLogger("graphviz").setLevel(logging.WARNING)

    root_logger.debug(
        f"🔧 Logging initialised (level={logging.getLevelName(effective)}, debug={settings.DEBUG})"
    )


class SearchLoggerAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        extra = kwargs.get("extra", {})
        if self.extra:
            extra["search_context"] = self.extra.get("context", "unknown")
        kwargs["extra"] = extra
        return msg, kwargs


class CLILoggerAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        extra = kwargs.get("extra", {})
        if self.extra:
            extra["cli_context"] = self.extra.get("context", "unknown")
        kwargs["extra"] = extra
        return msg, kwargs


def get_search_logger(context: str = "general") -> SearchLoggerAdapter:
    """Logger for enumeration engines, tagged with the engine name"""
    return SearchLoggerAdapter(logging.getLogger("causal_search"), {"context": context})


def get_cli_logger(context: str = "general") -> CLILoggerAdapter:
    """Logger for CLI subcommands"""
    return CLILoggerAdapter(logging.getLogger("causal_cli"), {"context": context})


def log_search_progress(
    logger: logging.LoggerAdapter,
    emitted: int,
    visited: int,
    elapsed: float,
    branch: int | None = None,
) -> None:
    """Periodic progress line for the enumeration engines"""
    rate = visited / elapsed if elapsed > 0 else 0.0
    where = f" | branch {branch}" if branch is not None else ""
    logger.info(
        f"📈 emitted={emitted} visited={visited} | {elapsed:.1f}s ({rate:.0f} leaves/s){where}"
    )


def log_cli_command(command: str, status: int, duration_ms: float) -> None:
    """Log a finished CLI command with its exit status"""
    logger = get_cli_logger(command)
    marker = "✅ OK" if status == 0 else f"❌ EXIT {status}"
    logger.info(f"{marker} {command} | {duration_ms:.1f}ms")
