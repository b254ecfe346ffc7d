import json
import logging
import os

import pandas as pd

from .errors import ParseError, UsageError

logger = logging.getLogger(__name__)


def read_source(path: str) -> str:
    try:
        with open(path, "rb") as handle:
            data = handle.read()
    except FileNotFoundError:
        raise UsageError(f"input file {path!r} does not exist") from None
    except OSError as e:
        raise UsageError(f"reading {path!r} failed with error {e}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        before = data[:e.start]
        line = before.count(b"\n") + 1
        column = e.start - before.rfind(b"\n")
        raise ParseError(f"{path!r} is not UTF-8 text: byte 0x{data[e.start]:02x}", line, column) from None
    return text.replace("\r\n", "\n").replace("\r", "\n")


def load_json(path: str):
    text = read_source(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path!r} is not valid JSON: {e}") from None


def write_artifact(text: str, path: str | None = None, stream=None) -> None:
    if path is None:
        stream.write(text)
        return
    folder = os.path.dirname(path)
    # Create folder for the artifact if it does not exist
    if folder and not os.path.exists(folder):
        os.makedirs(folder)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info("artifact written to %s", path)


def render_table(rows: list[dict], columns: list[str]) -> str:
    if not rows:
        return "(empty)\n"
    return pd.DataFrame(rows, columns=columns).to_string(index=False) + "\n"
