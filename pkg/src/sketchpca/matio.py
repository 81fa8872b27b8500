"""Matrix file formats.

Binary format: magic ``DMAT``, then little-endian u32 version (1),
u64 row count, u64 column count, then rows*cols float64 values in
row-major order. Total size is exactly 24 + 8*rows*cols bytes, which
makes truncation detectable up front.

Text format: comma-separated values, one matrix row per line, floats
written with shortest round-trip precision (Python repr), optional
single header line on read.
"""

import io
import os
import struct

import numpy as np

from .exceptions import FormatError
from .linalg import as_matrix

__all__ = ["write_matrix", "read_matrix", "write_matrix_csv", "read_matrix_csv"]

MAGIC = b"DMAT"
VERSION = 1
HEADER = struct.Struct("<4sIQQ")  # magic, version, rows, cols


def write_matrix(path, x):
    """Write ``x`` to ``path`` in the binary matrix format."""
    x = as_matrix(x, "x")
    rows, cols = x.shape
    with open(path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, rows, cols))
        f.write(np.ascontiguousarray(x, dtype="<f8").tobytes())


def _read_header(f, path):
    """Parse and validate the binary header, returning (rows, cols)."""
    raw = f.read(HEADER.size)
    if len(raw) < HEADER.size:
        raise FormatError(f"{path}: header truncated at byte {len(raw)}, need {HEADER.size}")
    magic, version, rows, cols = HEADER.unpack(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r} at byte 0, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version} at byte 4")
    if rows == 0 or cols == 0:
        raise FormatError(f"{path}: empty matrix ({rows}x{cols}) in header")
    return rows, cols


def _check_size(f, path, rows, cols):
    expected = HEADER.size + 8 * rows * cols
    actual = os.fstat(f.fileno()).st_size
    if actual != expected:
        raise FormatError(
            f"{path}: expected {expected} bytes for a {rows}x{cols} matrix, found {actual}"
        )


def read_matrix(path):
    """Read a matrix written by `write_matrix`.

    Raises FormatError for structural problems (magic, version,
    truncation) and ValueError for non-finite payload values.
    """
    with open(path, "rb") as f:
        rows, cols = _read_header(f, path)
        _check_size(f, path, rows, cols)
        data = np.frombuffer(f.read(8 * rows * cols), dtype="<f8")
    x = data.reshape(rows, cols).astype(np.float64)
    if not np.isfinite(x).all():
        raise ValueError(f"{path}: matrix contains non-finite entries")
    return x


def write_matrix_csv(path, x):
    """Write ``x`` as CSV with shortest round-trip float formatting."""
    x = as_matrix(x, "x")
    with open(path, "w", encoding="ascii", newline="") as f:
        for row in x:
            f.write(",".join(repr(float(v)) for v in row))
            f.write("\n")


def read_matrix_csv(path):
    """Read a CSV matrix, skipping one optional non-numeric header line."""
    with open(path, "r", encoding="ascii", newline="") as f:
        first = f.readline()
        if not first.strip():
            raise FormatError(f"{path}: empty file")
        try:
            [float(tok) for tok in first.strip().split(",")]
            body = first + f.read()
        except ValueError:
            body = f.read()
    try:
        x = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2)
    except ValueError as e:
        raise FormatError(f"{path}: malformed CSV matrix: {e}") from None
    if not np.isfinite(x).all():
        raise ValueError(f"{path}: matrix contains non-finite entries")
    return x
