"""
Command-line front end.
"""
from .commands import COMMANDS
from .parser import build_parser
from .report import RunReport, Table

__all__ = ["COMMANDS", "RunReport", "Table", "build_parser"]
