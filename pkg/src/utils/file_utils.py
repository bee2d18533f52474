"""File utility functions: run-config text files and CSV/JSON artifacts."""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Union

import pandas as pd

PathLike = Union[str, Path]


def read_key_value_file(path: PathLike) -> Dict[str, str]:
    """
    Parse a flat ``key = value`` text file.

    Args:
        path: File to read

    Returns:
        Mapping of keys to raw string values, in file order

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: On a line without '=' or a repeated key
    """
    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8-sig") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ValueError(f"line {lineno}: empty key")
            if key in values:
                raise ValueError(f"line {lineno}: duplicate key '{key}'")
            values[key] = value
    return values


def ensure_directory(path: PathLike) -> Path:
    """Create ``path`` (and parents) if needed."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_frame_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    """Write a DataFrame with round-trippable floats."""
    path = Path(path)
    ensure_directory(path.parent)
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def write_rows_csv(rows: Iterable[Mapping[str, Any]], path: PathLike, columns: List[str]) -> Path:
    """Write dict rows; an empty iterable yields a header-only file."""
    frame = pd.DataFrame(list(rows), columns=columns)
    return write_frame_csv(frame, path)


def dumps_json(payload: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_json(payload: Any, path: PathLike) -> Path:
    path = Path(path)
    ensure_directory(path.parent)
    path.write_text(dumps_json(payload), encoding="utf-8")
    return path


def read_frame_csv(path: PathLike) -> pd.DataFrame:
    """
    Read a CSV artifact written by this package.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the file has no data rows
    """
    frame = pd.read_csv(path)
    if frame.empty:
        raise ValueError(f"No data rows in {path}")
    return frame
