"""Logging configuration with rich console output and file logging"""

import logging
from pathlib import Path
from rich.console import Console
from rich.logging import RichHandler

# Diagnostics go to stderr; stdout carries the command summaries
console = Console(stderr=True)

DEFAULT_LOG_DIR = Path.home() / ".smbs" / "logs"
DEFAULT_LOG_FILE = "smbs.log"
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: str, level: str = "INFO", log_file: bool = False,
                 log_dir: Path = DEFAULT_LOG_DIR) -> logging.Logger:
    """
    Configure the package logger with rich formatting and optional file logging

    Only the ``name`` logger and its children are touched, so applications
    importing smbs keep their own root configuration. Calling this again
    replaces the handlers installed by the previous call.

    Args:
        name: Logger name, normally the package name
        level: Console logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Whether to also write logs to a file
        log_dir: Directory holding the log file

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console_handler = RichHandler(console=console, rich_tracebacks=True, show_path=False)
    console_handler.setLevel(level.upper())
    console_handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    logger.addHandler(console_handler)

    if log_file:
        log_dir.mkdir(parents=True, exist_ok=True)
        # The file always captures DEBUG, whatever the console verbosity
        file_handler = logging.FileHandler(log_dir / DEFAULT_LOG_FILE, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
        file_handler.setLevel(logging.DEBUG)
        logger.addHandler(file_handler)

    logger.setLevel(logging.DEBUG if log_file else level.upper())
    logger.propagate = False
    return logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance"""
    return logging.getLogger(name)
