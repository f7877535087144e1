"""Key array files.

Text: optional header ``# n=<N> state=<State>``, then whitespace-separated
signed decimal integers. Binary: magic ``IPRM``, version byte 1, n as a
little-endian u64, then n little-endian i64 values. Readers detect the format
by the magic bytes.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .core_model import SemanticState, check_length

MAGIC = b"IPRM"
VERSION = 1
_HEADER = re.compile(r"#\s*n=(\d+)(?:\s+state=(\w+))?\s*$")


class FormatError(ValueError):
    pass


@dataclass
class DataFile:
    values: np.ndarray
    state: Optional[SemanticState] = None

    @property
    def n(self) -> int:
        return len(self.values)


def parse_text(text: str) -> DataFile:
    declared = None
    state = None
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            m = _HEADER.match(stripped)
            if m is None or declared is not None or tokens:
                raise FormatError(f"line {lineno}: unexpected comment or header {stripped!r}")
            declared = int(m.group(1))
            if m.group(2):
                try:
                    state = SemanticState(m.group(2))
                except ValueError:
                    raise FormatError(f"line {lineno}: unknown state {m.group(2)!r}") from None
            continue
        tokens.extend(stripped.split())
    try:
        values = np.array([int(t) for t in tokens], dtype=np.int64)
    except (ValueError, OverflowError) as exc:
        raise FormatError(f"bad integer: {exc}") from None
    if declared is not None and declared != len(values):
        raise FormatError(f"header declares n={declared} but {len(values)} values follow")
    return DataFile(values, state)


def format_text(df: DataFile, header: bool = True) -> str:
    """Canonical text: optional header line, then one line of values."""
    out = []
    if header:
        state = f" state={df.state.value}" if df.state is not None else ""
        out.append(f"# n={df.n}{state}")
    out.append(" ".join(str(int(v)) for v in df.values))
    return "\n".join(out) + "\n"


def parse_binary(data: bytes) -> DataFile:
    if len(data) < 13 or data[:4] != MAGIC:
        raise FormatError("not an IPRM binary file")
    if data[4] != VERSION:
        raise FormatError(f"unsupported version {data[4]}")
    (n,) = struct.unpack_from("<Q", data, 5)
    body = data[13:]
    if len(body) != 8 * n:
        raise FormatError(f"declared n={n} needs {8 * n} bytes, found {len(body)}")
    values = np.frombuffer(body, dtype="<i8").astype(np.int64)
    return DataFile(values)


def format_binary(df: DataFile) -> bytes:
    check_length(df.values)
    vals = np.asarray(df.values, dtype="<i8")
    return MAGIC + bytes([VERSION]) + struct.pack("<Q", len(vals)) + vals.tobytes()


def loads(data: bytes) -> DataFile:
    if data[:4] == MAGIC:
        return parse_binary(data)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise FormatError("input is neither IPRM binary nor ASCII text") from None
    return parse_text(text)


def read(path) -> DataFile:
    return loads(Path(path).read_bytes())


def write(path, df: DataFile, binary: bool = False, header: bool = True) -> None:
    data = format_binary(df) if binary else format_text(df, header).encode("ascii")
    Path(path).write_bytes(data)
