# infodom/logger.py
# Copyright 2025 Infodom Team
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0

"""Per-module loggers for infodom.

Reports go to stdout, so every console handler writes to stderr.  Module
logs are mirrored to ``$INFODOM_LOG_ROOT/<module>.log``.
"""

import logging
import os
import sys
from typing import Optional, Union

#: Environment variable naming the directory for per-module log files.
LOG_ROOT_ENV = "INFODOM_LOG_ROOT"

_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"
_FILE_FORMAT = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"
_DATEFMT = "%Y-%m-%d %H:%M:%S"


def setup_logging(level: int = logging.WARNING) -> None:
    """Root configuration, run once on ``import infodom``.

    The root logger gets a null handler so library use stays silent
    unless a module logger reaches WARNING.
    """
    logging.basicConfig(level=level, format=_FORMAT, datefmt=_DATEFMT, handlers=[logging.NullHandler()])


def get_logger(
        name: Optional[str] = None,
        level: Union[int, str] = logging.INFO,
) -> logging.Logger:
    """Logger for an infodom module, usually ``get_logger(__name__)``.

    Warnings and errors (failed re-verification, malformed input files)
    reach stderr.  INFO and above also go to the module's log file
    unless ``INFODOM_LOG_ROOT`` is set to the empty string, which the
    test suite does.

    Args:
        name: Module name; also the log file stem.
        level: Logger threshold as a constant or a level name.

    Raises:
        ValueError: If *name* is empty.
    """
    if not name:
        raise ValueError("Logger name is required for file logging")

    logger = logging.getLogger(name)
    # already configured
    if logger.handlers:
        return logger
    logger.setLevel(level)

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.WARNING)
    console.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATEFMT))
    logger.addHandler(console)

    log_root = os.environ.get(LOG_ROOT_ENV, ".log")
    if log_root:
        os.makedirs(log_root, exist_ok=True)
        file_handler = logging.FileHandler(os.path.join(log_root, f"{name}.log"), encoding="utf-8")
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(logging.Formatter(_FILE_FORMAT, datefmt=_DATEFMT))
        logger.addHandler(file_handler)

    return logger
