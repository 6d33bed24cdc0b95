"""
Application orchestrator: parse arguments, run one command, render the report.
"""
import logging
import sys
import time
from typing import Any, Dict, List, Optional, TextIO

from src.core.config import config
from src.core.errors import IsoReduceError
from src.utils.logging_config import setup_logging

logger = logging.getLogger(__name__)


class Application:
    """Main application coordinator."""

    def __init__(self, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr

    def run(self, argv: List[str]) -> int:
        """
        Run the command line and return the process exit code.

        0 success, 1 domain error, 2 input error, 3 numerical failure.
        """
        from src.cli.parser import build_parser

        parser = build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)

        level = args.log_level or config.get("logging.level", "INFO")
        setup_logging("src", log_file=config.get("logging.log_file") or None, level=logging.getLevelName(level))

        response = self._process_command(args)
        self._emit(args, response)
        return response["exit_code"]

    def _process_command(self, args) -> Dict[str, Any]:
        """Run a parsed command and wrap the outcome in a response dict."""
        from src.cli.commands import COMMANDS

        handler = COMMANDS[args.command]

        started = time.perf_counter()
        try:
            report = handler(args)
        except IsoReduceError as e:
            logger.error(f"{args.command} failed: {e}")
            return {
                "type": "response",
                "status": "error",
                "message": str(e),
                "error": type(e).__name__,
                "exit_code": e.exit_code,
            }
        except OSError as e:
            logger.error(f"{args.command} failed: {e}")
            return {
                "type": "response",
                "status": "error",
                "message": str(e),
                "error": type(e).__name__,
                "exit_code": 2,
            }

        if not args.no_timestamp:
            report.duration_s = time.perf_counter() - started
        return {
            "type": "response",
            "status": "success" if report.exit_code == 0 else "failure",
            "message": report.command,
            "report": report,
            "exit_code": report.exit_code,
        }

    def _emit(self, args, response: Dict[str, Any]):
        if "report" in response:
            report = response["report"]
            self.stdout.write(report.to_json() + "\n" if args.json else report.to_text())
            return

        if args.json:
            import json
            doc = {k: response[k] for k in ("status", "error", "message", "exit_code")}
            self.stdout.write(json.dumps(doc, indent=2) + "\n")
        self.stderr.write(f"error: {response['message']}\n")
