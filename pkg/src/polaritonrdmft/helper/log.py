import logging
import os
from datetime import datetime
from typing import Optional

# Create a logger instance shared by the whole package
logger = logging.getLogger("polaritonrdmft")

# Set the logging level
logger.setLevel(logging.INFO)

# Create a formatter for all handlers
formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

# Create a stream handler
stream_handler = logging.StreamHandler()
stream_handler.setFormatter(formatter)
logger.addHandler(stream_handler)


def setup_logging(log_dir: Optional[str] = None, level: int = logging.INFO) -> None:
    """Set the package log level and, if `log_dir` is given, mirror the log into a
    timestamped file below it."""

    logger.setLevel(level)
    if log_dir is None:
        return

    if not os.path.exists(log_dir):
        os.makedirs(log_dir)
    log_file = os.path.join(
        log_dir,
        f'polaritonrdmft_{datetime.now().strftime("%Y-%m-%d_%H-%M-%S")}.log',
    )
    if any(
        isinstance(h, logging.FileHandler) and h.baseFilename == os.path.abspath(log_file)
        for h in logger.handlers
    ):
        return

    file_handler = logging.FileHandler(log_file)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)
