"""
Logging Configuration Utility
Sets up logging to the console and, optionally, to a rotating file

Usage:
    from utils.logging_config import setup_logging

    setup_logging()
    logger = logging.getLogger(__name__)
"""

import os
import logging
from datetime import datetime
from logging.handlers import RotatingFileHandler
import pytz

# Log files and report stamps are dated in UTC
UTC = pytz.utc


def setup_logging(level=logging.INFO, log_dir="logs", log_prefix="hyponormal"):
    """
    Setup logging configuration to write to the console and a log file

    Args:
        level: Logging level (default: logging.INFO)
        log_dir: Directory to store log files, or None for console only (default: "logs")
        log_prefix: Prefix for log file names (default: "hyponormal")

    Returns:
        Path of the log file, or None when no file handler was added
    """
    root_logger = logging.getLogger()

    # Already configured (entry script ran twice, or pytest owns the root logger)
    if root_logger.handlers:
        root_logger.setLevel(level)
        return None

    root_logger.setLevel(level)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Console handler goes to stderr so stdout stays machine-readable
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_dir is None:
        return None

    if not os.path.exists(log_dir):
        os.makedirs(log_dir, exist_ok=True)

    current_date = datetime.now(UTC).strftime('%Y-%m-%d')
    log_filename = os.path.join(log_dir, f"{log_prefix}_{current_date}.log")

    # Rotates at 10MB, keeps 5 backups
    file_handler = RotatingFileHandler(
        log_filename,
        maxBytes=10*1024*1024,
        backupCount=5,
        encoding='utf-8'
    )
    file_handler.setLevel(level)
    file_handler.setFormatter(formatter)
    root_logger.addHandler(file_handler)

    root_logger.debug(f"Logging initialized. Log file: {os.path.abspath(log_filename)}")
    return os.path.abspath(log_filename)
