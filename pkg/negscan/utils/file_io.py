"""
Atomic output writers: content goes to a temporary file in the target
directory, which is then renamed over the destination.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

import pandas as pd

logger = logging.getLogger(__name__)


def write_text_atomic(path: os.PathLike, text: str) -> Path:
    """
    Write text as UTF-8 with LF line endings, replacing path atomically.

    Args:
        path: Destination file.
        text: Content to write.

    Returns:
        The destination path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.debug(f"Wrote {path}")
    return path


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_json(path: os.PathLike, data: Any) -> Path:
    return write_text_atomic(path, to_json(data))


def frame_to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def write_csv(path: os.PathLike, frame: pd.DataFrame) -> Path:
    """Write a table as RFC-4180 CSV (minimal quoting) with a header row."""
    return write_text_atomic(path, frame_to_csv(frame))
