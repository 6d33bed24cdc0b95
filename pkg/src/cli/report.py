"""
Run reports: every command result rendered as aligned text or JSON.
"""
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.infinite.countable_graph import TruncationReport
from src.utils.numbers import format_complex, format_real


@dataclass
class Table:
    columns: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)

    def add(self, *row):
        self.rows.append(row)


@dataclass
class RunReport:
    """
    Result of one command: echo, input digest, named results, tolerances and
    truncation metadata, warnings and (optionally) wall-clock duration.
    """

    command: str
    inputs_digest: str
    results: Dict[str, Any] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=dict)
    truncation: Dict[str, TruncationReport] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    duration_s: Optional[float] = None
    exit_code: int = 0

    def add(self, name: str, value: Any):
        self.results[name] = value

    def to_dict(self) -> Dict[str, Any]:
        doc = {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "status": "success" if self.exit_code == 0 else "failure",
            "results": {k: _jsonable(v) for k, v in self.results.items()},
            "tolerances": {k: float(v) for k, v in self.tolerances.items()},
            "truncation": {k: v.to_dict() for k, v in self.truncation.items()},
            "warnings": list(self.warnings),
        }
        if self.duration_s is not None:
            doc["duration_s"] = round(self.duration_s, 6)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"inputs: {self.inputs_digest}"]
        for name, value in self.results.items():
            lines.extend(_render(name, value))
        if self.tolerances:
            lines.append("tolerances:")
            lines.extend(f"  {k} = {format_real(v)}" for k, v in self.tolerances.items())
        for name, report in self.truncation.items():
            lines.append(f"truncation [{name}]:")
            lines.extend("  " + line for line in report.to_text().splitlines())
        if self.warnings:
            lines.append("warnings:")
            lines.extend(f"  {w}" for w in self.warnings)
        if self.duration_s is not None:
            lines.append(f"duration: {self.duration_s:.3f} s")
        return "\n".join(lines) + "\n"


def _scalar(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_real(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(complex(value))
    if value is None:
        return "-"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Table):
        return {"columns": list(value.columns), "rows": [[_jsonable(c) for c in row] for row in value.rows]}
    if isinstance(value, np.ndarray):
        return [_jsonable(x) for x in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(x) for x in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(complex(value))
    return value


def _render_table(table: Table) -> List[str]:
    cells = [[str(c) for c in table.columns]] + [[_scalar(c) for c in row] for row in table.rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(table.columns))]
    return ["  " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]


def _render(name: str, value: Any) -> List[str]:
    if isinstance(value, Table):
        return [f"{name}:"] + _render_table(value)
    if isinstance(value, np.ndarray) and value.ndim == 2:
        rows = [[_scalar(x) for x in row] for row in value]
        width = max((len(c) for row in rows for c in row), default=0)
        return [f"{name}:"] + ["  [ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in rows]
    if isinstance(value, (np.ndarray, list, tuple)):
        return [f"{name}: [" + ", ".join(_scalar(x) for x in value) + "]"]
    return [f"{name}: {_scalar(value)}"]


def inputs_digest(paths: Sequence[str], arguments: Dict[str, Any]) -> str:
    """sha256 over the input file bytes and the computational arguments."""
    digest = hashlib.sha256()
    for path in paths:
        digest.update(Path(path).read_bytes())
    for key in sorted(arguments):
        digest.update(f"{key}={arguments[key]!r};".encode("utf-8"))
    return "sha256:" + digest.hexdigest()[:16]
