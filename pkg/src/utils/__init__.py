"""Utility functions for the slow-fast early-warning toolkit."""

from .file_utils import (
    dumps_json,
    ensure_directory,
    read_frame_csv,
    read_key_value_file,
    write_frame_csv,
    write_json,
    write_rows_csv,
)

__all__ = [
    "dumps_json",
    "ensure_directory",
    "read_frame_csv",
    "read_key_value_file",
    "write_frame_csv",
    "write_json",
    "write_rows_csv",
]
