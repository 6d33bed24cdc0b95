"""Core application logic: configuration, errors, orchestration."""
from .config import Config, config
from .errors import IsoReduceError

__all__ = ["Config", "IsoReduceError", "config"]
