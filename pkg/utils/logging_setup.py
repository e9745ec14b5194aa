"""Logging Setup - Coloured stderr logging for the command-line tools."""

import logging
import sys
from typing import Dict

from colorama import Fore, Style, init as colorama_init


_LEVEL_COLORS: Dict[int, str] = {
    logging.DEBUG: Fore.CYAN,
    logging.INFO: Fore.GREEN,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Fore.RED + Style.BRIGHT,
}


class ColorFormatter(logging.Formatter):
    """Formatter that colours the level name with colorama codes."""

    def format(self, record: logging.LogRecord) -> str:
        color = _LEVEL_COLORS.get(record.levelno, "")
        original = record.levelname
        record.levelname = f"{color}{original}{Style.RESET_ALL}"
        try:
            return super().format(record)
        finally:
            record.levelname = original


def configure_logging(verbose: bool = False) -> logging.Logger:
    """Install a single coloured stderr handler on the root logger.

    Args:
        verbose: Log DEBUG messages when True, INFO otherwise.

    Returns:
        The configured root logger.
    """
    colorama_init()

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_sbp_console", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ColorFormatter("%(levelname)s %(name)s: %(message)s"))
    handler._sbp_console = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    return root
