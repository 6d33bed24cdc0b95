"""
Utility modules for isoReduce.
"""
from .logging_config import setup_logging
from .numbers import format_complex, format_real, parse_complex

__all__ = ["setup_logging", "format_complex", "format_real", "parse_complex"]
