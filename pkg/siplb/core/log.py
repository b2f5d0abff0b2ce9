# siplb/core/log.py
import logging
from typing import Optional, Union

from siplb.core.config import get_settings


def configure_logging(level: Optional[Union[int, str]] = None) -> None:
    """Configure the root logger with the project's log format."""
    settings = get_settings()
    logging.basicConfig(
        level=level if level is not None else settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        force=True,
    )
