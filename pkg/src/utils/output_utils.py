import json
import math
import os
import re
from dataclasses import asdict, is_dataclass
from datetime import datetime
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import pandas as pd

from utils.rich_utils import console

FORMAT_VERSION = 1


def clean_file_name(name: str) -> str:
    clean_name = name.lower()
    clean_name = clean_name.replace(" ", "_")
    clean_name = re.sub(r"_+", "_", clean_name)
    clean_name = re.sub(r"[^a-z0-9_-]", "", clean_name)
    return clean_name


def _output_path(name: str, output_dir: str, suffix: str, timestamp_file: bool) -> Path:
    output_path = Path(output_dir)
    os.makedirs(output_path, exist_ok=True)

    # Determine filename based on timestamp preference
    if timestamp_file:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        filename = f"{clean_file_name(name)}_{timestamp}"
    else:
        filename = clean_file_name(name)

    return output_path / f"{filename}.{suffix}"


def to_jsonable(value: Any) -> Any:
    """Convert dataclasses, enums, fractions and numpy scalars into plain JSON values."""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    return value


_FLOAT_MARK = "\x00f"
_MARKED_FLOAT = re.compile(r'"\\u0000f([^"]+)"')


def _mark_floats(value: Any) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        text = f"{value:.17g}"
        if not any(c in text for c in ".en"):
            text += ".0"
        return _FLOAT_MARK + text
    if isinstance(value, dict):
        return {k: _mark_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_mark_floats(v) for v in value]
    return value


def dumps(value: Any, indent: Optional[int] = None) -> str:
    """json.dumps with finite floats written to 17 significant digits, as in write_csv."""
    text = json.dumps(_mark_floats(to_jsonable(value)), indent=indent, sort_keys=True)
    return _MARKED_FLOAT.sub(r"\1", text)


def report_header(command: str, config: Mapping[str, Any]) -> Dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "config": to_jsonable(config),
    }


def write_csv(
    name: str,
    dataset: pd.DataFrame,
    output_dir: str,
    command: str,
    config: Mapping[str, Any],
    timestamp_file: bool = False,
) -> str:
    """Write a sweep table as CSV, preceded by the format/config comment header."""
    file_path = _output_path(name, output_dir, "csv", timestamp_file)
    header = report_header(command, config)
    with open(file_path, "w", newline="") as f:
        f.write(f"# format_version: {header['format_version']}\n")
        f.write(f"# command: {command}\n")
        f.write(f"# config: {json.dumps(header['config'], sort_keys=True)}\n")
        dataset.to_csv(f, index=False, float_format="%.17g")

    console.print(f"[green]Output saved to:[/] {file_path}")
    return str(file_path)


def write_json_report(
    name: str,
    report: Mapping[str, Any],
    output_dir: str,
    command: str,
    config: Mapping[str, Any],
    timestamp_file: bool = False,
) -> str:
    file_path = _output_path(name, output_dir, "json", timestamp_file)
    document = report_header(command, config)
    document["results"] = to_jsonable(report)
    with open(file_path, "w") as f:
        f.write(dumps(document, indent=2))
        f.write("\n")

    console.print(f"[green]Output saved to:[/] {file_path}")
    return str(file_path)


def write_jsonl(
    name: str,
    records: List[Dict[str, Any]],
    output_dir: str,
    timestamp_file: bool = False,
) -> str:
    """Write per-sample long-form rows, one JSON object per line."""
    file_path = _output_path(name, output_dir, "jsonl", timestamp_file)
    with open(file_path, "w") as f:
        for record in records:
            f.write(dumps(record) + "\n")

    console.print(f"[green]Output saved to:[/] {file_path}")
    return str(file_path)


def write_text_lines(
    name: str,
    lines: List[str],
    output_dir: str,
    timestamp_file: bool = False,
) -> str:
    file_path = _output_path(name, output_dir, "txt", timestamp_file)
    with open(file_path, "w") as f:
        for line in lines:
            f.write(line.rstrip("\n") + "\n")

    console.print(f"[green]Output saved to:[/] {file_path}")
    return str(file_path)
