"""8-bit PGM (P2 ASCII / P5 binary) reader and writer."""
from __future__ import annotations

import os

import numpy as np

from .phasecore import GrayImage
from .report import atomic_write_bytes


class PGMError(OSError):
    """File is not a readable 8-bit PGM."""


def _tokens(data: bytes, count: int, pos: int = 0):
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the last one.
    """
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise PGMError("truncated PGM header")
        out.append(data[start:pos])
    return out, pos + 1


def decode_pgm(data: bytes) -> GrayImage:
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMError(f"not a PGM file (magic {magic!r})")
    (w, h, maxval), pos = _tokens(data, 3, 2)
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise PGMError("non-numeric PGM header field") from exc
    if maxval != 255:
        raise PGMError(f"only 8-bit PGM with maxval 255 is supported, got {maxval}")
    count = width * height
    if magic == b"P5":
        raster = data[pos:pos + count]
        if len(raster) != count:
            raise PGMError(f"expected {count} raster bytes, got {len(raster)}")
        px = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = b" ".join(
            line.split(b"#", 1)[0] for line in data[pos - 1:].splitlines()
        )
        vals = body.split()
        if len(vals) < count:
            raise PGMError(f"expected {count} samples, got {len(vals)}")
        px = np.array([int(v) for v in vals[:count]], dtype=np.int64)
        if px.size and (px.min() < 0 or px.max() > 255):
            raise PGMError("sample out of range 0..255")
    return GrayImage(width, height, px.astype(np.uint8))


def encode_pgm(img: GrayImage, binary: bool = True) -> bytes:
    header = b"%s\n%d %d\n255\n" % (b"P5" if binary else b"P2", img.width, img.height)
    if binary:
        return header + img.pixels.tobytes()
    rows = img.pixels.reshape(img.height, img.width)
    body = b"".join(b" ".join(b"%d" % v for v in row) + b"\n" for row in rows)
    return header + body


def read_pgm(path: str | os.PathLike) -> GrayImage:
    with open(path, "rb") as fh:
        return decode_pgm(fh.read())


def write_pgm(path: str | os.PathLike, img: GrayImage, binary: bool = True) -> None:
    atomic_write_bytes(path, encode_pgm(img, binary))
