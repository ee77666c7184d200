"""Flat-file writers with fixed float formatting."""
from __future__ import annotations

import csv
import math
from pathlib import Path

from . import __version__
from .config import canonical_json

__all__ = ["format_value", "write_csv", "write_json", "header_comment"]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) or hasattr(value, "dtype"):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def header_comment(config_hash: str) -> str:
    return f"# nwise-ghz {__version__} config_hash={config_hash}"


def write_csv(path: Path, columns, rows, config_hash: str) -> Path:
    """``rows`` is an iterable of sequences or of dicts keyed by column."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(header_comment(config_hash) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            values = [row.get(c) for c in columns] if isinstance(row, dict) else row
            writer.writerow([format_value(v) for v in values])
    return path


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.write_text(canonical_json(obj) + "\n", encoding="utf-8", newline="\n")
    return path
