"""
Centralized logging configuration with rotating file handlers.
"""
import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path
import sys


def setup_logging(name: str, log_file: str = None, level: int = None) -> logging.Logger:
    """
    Setup a logger with a console handler and an optional rotating file handler.

    Console output goes to stderr; stdout is reserved for command reports.

    Args:
        name: Logger name
        log_file: Log file name (without path)
        level: Logging level; LOG_LEVEL in the environment wins when set

    Returns:
        Configured logger instance
    """
    env_level = os.environ.get("LOG_LEVEL")
    if env_level:
        level = logging.getLevelName(env_level.upper())
    if not isinstance(level, int):
        level = logging.INFO

    # Create logger
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Avoid duplicate handlers
    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(level)
        return logger

    # Format
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Console handler
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler (rotating)
    if log_file:
        log_dir = Path(os.environ.get("ISOREDUCE_LOG_DIR", "logs"))
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_dir / log_file,
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger

