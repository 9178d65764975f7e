"""The ``COCY 1`` text format for edge configurations.

::

    COCY 1
    W <int> H <int>
    <H+1 lines of W chars>     horizontal labels, row y = 0 first
    <H lines of W+1 chars>     vertical labels, row y = 0 first

Every line ends in ``\\n`` (including the last); any other byte is an error.
The encoding is canonical: one byte sequence per configuration.
"""
import re

import numpy as np

from .errors import ParseError
from .lattice import EdgeConfig

MAGIC = b"COCY 1"
_DIMS = re.compile(rb"W ([1-9][0-9]*) H ([1-9][0-9]*)")


def _rows(arr) -> bytes:
    chars = (arr + ord("0")).astype(np.uint8)
    nl = np.full((arr.shape[0], 1), ord("\n"), dtype=np.uint8)
    return np.hstack([chars, nl]).tobytes()


def encode_config(cfg: EdgeConfig) -> bytes:
    header = MAGIC + b"\n" + f"W {cfg.width} H {cfg.height}\n".encode("ascii")
    return header + _rows(cfg.h) + _rows(cfg.v)


def _section(index, H):
    return "horizontal" if index < 3 + H else "vertical"


def _check_block(lines, first, count, ncols, section):
    for i, row in enumerate(lines[first:first + count]):
        if len(row) != ncols:
            raise ParseError(f"{section} row has {len(row)} characters, expected {ncols}",
                             line=first + i + 1, column=min(len(row), ncols) + 1)
        if row.translate(None, b"01"):
            col = next(j for j, c in enumerate(row) if c not in b"01")
            raise ParseError(f"invalid byte {row[col:col + 1]!r} in {section} row",
                             line=first + i + 1, column=col + 1)
    data = np.frombuffer(b"".join(lines[first:first + count]), dtype=np.uint8) - ord("0")
    return data.reshape(count, ncols)


def decode_config(data: bytes) -> EdgeConfig:
    """Parse a COCY document.

    Raises
    ------
    ParseError
        With the 1-based line (and column where meaningful) of the first
        problem; truncated input names the section that is cut short.
    """
    if isinstance(data, str):
        data = data.encode("ascii")
    complete = data.endswith(b"\n")
    lines = data.split(b"\n")
    if complete:
        lines.pop()
    if not lines or lines[0] != MAGIC:
        raise ParseError("missing 'COCY 1' header", line=1, column=1)
    if len(lines) < 2 or (len(lines) == 2 and not complete):
        raise ParseError("missing dimension line", line=2)
    m = _DIMS.fullmatch(lines[1])
    if m is None:
        raise ParseError("dimension line must read 'W <int> H <int>'", line=2, column=1)
    W, H = int(m.group(1)), int(m.group(2))
    expected = 3 + 2 * H
    n_full = len(lines) if complete else len(lines) - 1
    if not complete and n_full == expected - 1 and len(lines[-1]) == W + 1:
        raise ParseError("missing trailing newline", line=expected, column=W + 2)
    if n_full < expected:
        index = n_full
        raise ParseError(f"truncated document: {_section(index, H)} section is incomplete", line=index + 1)
    if n_full > expected or not complete:
        raise ParseError("trailing data after vertical section", line=expected + 1, column=1)
    h = _check_block(lines, 2, H + 1, W, "horizontal")
    v = _check_block(lines, 3 + H, H, W + 1, "vertical")
    return EdgeConfig(h, v)


def read_config(path) -> EdgeConfig:
    with open(path, "rb") as fh:
        return decode_config(fh.read())


def write_config(path, cfg: EdgeConfig) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_config(cfg))
