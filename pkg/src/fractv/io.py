"""CSV and PGM readers and writers for signals and fields.

* CSV: a signal is one value per line; a field is a matrix whose rows run
  along ``y`` and whose comma-separated columns run along ``x``. Floats are
  written with 17 significant digits, so round trips are exact.
* PGM: ``P2`` (ASCII) or ``P5`` (binary, big-endian when ``maxval > 255``).
  Gray levels map linearly from ``[0, maxval]`` to ``[0, 1]``; image row
  ``j`` is grid row ``j``.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

__all__ = [
    "read_csv",
    "write_csv",
    "read_pgm",
    "write_pgm",
    "read_array",
    "write_array",
    "format_float",
]


def format_float(x: float) -> str:
    return f"{x:.17g}"


def read_csv(path: str | Path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from exc
    rows = [line.strip() for line in text.splitlines()]
    rows = [line for line in rows if line and not line.startswith("#")]
    if not rows:
        raise ValueError(f"{path}: no data")
    try:
        data = [[float(tok) for tok in line.split(",")] for line in rows]
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    widths = {len(row) for row in data}
    if len(widths) != 1:
        raise ValueError(f"{path}: rows have different lengths {sorted(widths)}")
    arr = np.array(data, dtype=np.float64)
    return arr[:, 0] if arr.shape[1] == 1 else arr


def write_csv(path: str | Path, values: np.ndarray) -> None:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    buf = io.StringIO()
    for row in values:
        buf.write(",".join(format_float(v) for v in row))
        buf.write("\n")
    Path(path).write_text(buf.getvalue())


def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    # header tokens separated by whitespace, '#' starts a comment
    tokens: list[bytes] = []
    i = 0
    while len(tokens) < count:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i >= len(data):
            raise ValueError("truncated PGM header")
        if data[i : i + 1] == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < len(data) and not data[j : j + 1].isspace():
            j += 1
        tokens.append(data[i:j])
        i = j
    return tokens, i


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a PGM image as a float field in ``[0, 1]``."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        (magic, width, height, maxval), end = _pgm_tokens(data, 4)
        width, height, maxval = int(width), int(height), int(maxval)
    except ValueError as exc:
        raise ValueError(f"{path}: malformed PGM header ({exc})") from exc
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"{path}: unsupported PGM magic {magic!r}")
    if not 0 < maxval < 65536 or width < 1 or height < 1:
        raise ValueError(f"{path}: bad PGM dimensions or maxval")
    count = width * height
    if magic == b"P2":
        try:
            pixels = np.array(data[end:].split()[:count], dtype=np.int64)
        except ValueError as exc:
            raise ValueError(f"{path}: bad ASCII pixel data") from exc
    else:
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        raw = data[end + 1 : end + 1 + count * dtype.itemsize]
        pixels = np.frombuffer(raw, dtype=dtype)
    if pixels.size != count:
        raise ValueError(f"{path}: expected {count} pixels, found {pixels.size}")
    return pixels.reshape(height, width).astype(np.float64) / maxval


def write_pgm(path: str | Path, values: np.ndarray, maxval: int = 65535, binary: bool = True) -> None:
    """Write a field in ``[0, 1]`` as PGM; values outside are clipped."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("PGM needs a 2D field")
    if not 0 < maxval < 65536:
        raise ValueError(f"maxval must lie in [1, 65535], got {maxval}")
    q = np.rint(np.clip(values, 0.0, 1.0) * maxval).astype(np.int64)
    height, width = q.shape
    header = f"{'P5' if binary else 'P2'}\n{width} {height}\n{maxval}\n".encode()
    if binary:
        body = q.astype(">u2" if maxval > 255 else "u1").tobytes()
    else:
        body = "\n".join(" ".join(str(v) for v in row) for row in q).encode() + b"\n"
    Path(path).write_bytes(header + body)


def read_array(path: str | Path) -> np.ndarray:
    """Dispatch on the file suffix (``.pgm`` or anything else as CSV)."""
    path = Path(path)
    if not path.exists():
        raise ValueError(f"input file not found: {path}")
    if path.suffix.lower() == ".pgm":
        return read_pgm(path)
    return read_csv(path)


def write_array(path: str | Path, values: np.ndarray) -> None:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        write_pgm(path, values)
    else:
        write_csv(path, values)
