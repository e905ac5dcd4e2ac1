"""
Logging utilities for the half-eigenvalue solver.
"""

import logging
import os
import sys

LEVELS = {
    'error': logging.ERROR,
    'info': logging.INFO,
    'debug': logging.DEBUG,
}


def setup_logger(name="halfspec", level=None, log_file=None):
    """
    Set up a logger with a standard-error handler and an optional file handler.

    Args:
        name (str): Logger name
        level (str): Logging level (error, info, debug)
        log_file (str): Path to log file, no file handler when unset

    Returns:
        logging.Logger: Configured logger instance
    """
    # Get level from environment or use default
    level = level or os.getenv('HALFSPEC_LOG', 'info')
    log_file = log_file or os.getenv('HALFSPEC_LOG_FILE')

    # Create logger
    logger = logging.getLogger(name)
    logger.setLevel(LEVELS.get(level.lower(), logging.INFO))

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    # Create formatters
    console_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    file_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s'
    )

    # Diagnostics go to standard error so they never mix with data on stdout
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(console_formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


def set_global_level(level):
    """
    Re-level every logger created through setup_logger.

    Args:
        level (str): Logging level (error, info, debug)
    """
    numeric_level = LEVELS.get(level.lower(), logging.INFO)
    for logger in logging.Logger.manager.loggerDict.values():
        if isinstance(logger, logging.Logger) and logger.handlers:
            logger.setLevel(numeric_level)


def log_pipeline_step(logger, step_name, start_time=None, end_time=None, **kwargs):
    """
    Log stage execution with timing and metadata.

    Args:
        logger: Logger instance
        step_name (str): Name of the stage
        start_time (datetime): Stage start time
        end_time (datetime): Stage end time
        **kwargs: Additional metadata to log
    """
    if start_time and end_time:
        duration = (end_time - start_time).total_seconds()
        logger.info(f"Step '{step_name}' completed in {duration:.2f} seconds")
    else:
        logger.info(f"Step '{step_name}' executed")

    # Log additional metadata
    for key, value in kwargs.items():
        logger.info(f"  {key}: {value}")
