"""Reading and writing feature matrices.

Binary layout (all little-endian)::

    offset  size  field
    0       4     magic  b"EAPM"
    4       4     version (uint32, currently 1)
    8       4     n_v    (uint32, rows)
    12      4     d_v    (uint32, columns)
    16      1     dtype  (0 = float32, 1 = float64)
    17      ...   row-major payload, n_v * d_v values

Files ending in ``.csv`` or ``.txt`` are read and written as plain rows of
comma-separated decimals instead.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import BadMagicError, BadVersionError, ParseError, TruncatedPayloadError

__all__ = ["MAGIC", "VERSION", "read_matrix", "write_matrix", "parse_csv_matrix"]

MAGIC = b"EAPM"
VERSION = 1
_HEADER = struct.Struct("<4sIIIB")
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
_CODES = {np.dtype("float32"): 0, np.dtype("float64"): 1}
_TEXT_SUFFIXES = (".csv", ".txt")


def _is_text(path) -> bool:
    return Path(path).suffix.lower() in _TEXT_SUFFIXES


def write_matrix(m, path, dtype="float64") -> None:
    """Write ``m`` to ``path``; the suffix picks binary or CSV."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if _is_text(path):
        a = a.astype(np.float64)
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            for row in a:
                fh.write(",".join(repr(float(x)) for x in row))
                fh.write("\n")
        return
    dt = np.dtype(dtype)
    if dt not in _CODES:
        raise ValueError(f"dtype must be float32 or float64, got {dtype}")
    n_v, d_v = a.shape
    if n_v >= 2**32 or d_v >= 2**32:
        raise ValueError("matrix dimensions exceed 32 bits")
    header = _HEADER.pack(MAGIC, VERSION, n_v, d_v, _CODES[dt])
    payload = np.ascontiguousarray(a, dtype=dt.newbyteorder("<")).tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_matrix(path) -> np.ndarray:
    """Load a matrix written by :func:`write_matrix` (or a hand-made CSV).

    Binary payloads come back in their stored precision.
    """
    if _is_text(path):
        with open(path, "r", encoding="utf-8") as fh:
            return parse_csv_matrix(fh.read(), source=os.fspath(path))
    with open(path, "rb") as fh:
        raw = fh.read()
    return _decode(raw, os.fspath(path))


def _decode(raw: bytes, source) -> np.ndarray:
    if len(raw) >= 4 and raw[:4] != MAGIC:
        raise BadMagicError(f"{source}: bad magic {raw[:4]!r}, expected {MAGIC!r}")
    if len(raw) < _HEADER.size:
        raise TruncatedPayloadError(f"{source}: header is {len(raw)} bytes, need {_HEADER.size}")
    _, version, n_v, d_v, code = _HEADER.unpack_from(raw)
    if version != VERSION:
        raise BadVersionError(f"{source}: unsupported version {version}")
    if code not in _DTYPES:
        raise ParseError(f"unknown dtype code {code}", source=source, field="dtype")
    if n_v < 1 or d_v < 1:
        raise ParseError(f"empty shape {n_v}x{d_v}", source=source, field="shape")
    dt = _DTYPES[code]
    expected = n_v * d_v * dt.itemsize
    body = len(raw) - _HEADER.size
    if body < expected:
        raise TruncatedPayloadError(f"{source}: payload has {body} bytes, need {expected}")
    if body > expected:
        raise ParseError(f"{body - expected} trailing bytes after payload", source=source)
    a = np.frombuffer(raw, dtype=dt, count=n_v * d_v, offset=_HEADER.size)
    return a.reshape(n_v, d_v).astype(dt.newbyteorder("="))


def parse_csv_matrix(text: str, source="<csv>") -> np.ndarray:
    """Parse comma-separated rows; blank lines are skipped.

    >>> parse_csv_matrix("1,2\\n3,4")
    array([[1., 2.],
           [3., 4.]])
    """
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(
                f"expected {width} values, found {len(cells)}", source=source, line=lineno
            )
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            bad = next(i for i, c in enumerate(cells) if not _is_float(c))
            raise ParseError(
                f"not a number: {cells[bad].strip()!r}",
                source=source,
                line=lineno,
                field=f"column {bad + 1}",
            ) from None
    if not rows:
        raise ParseError("no data rows", source=source)
    return np.array(rows, dtype=np.float64)


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True
