"""Scalar grids on the pixel domain, plus PGM/PNG input and mask/field output.

Grids are plain 2-D ``float64`` numpy arrays of shape ``(height, width)``,
row-major, indexed as ``grid[y, x]`` with ``x`` the column.  Arrays returned
by this module are marked read-only so they can be shared freely.
"""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .errors import (
    EmptyImageError,
    ImageIOError,
    NonBinaryMaskError,
    NonFiniteError,
    UnreadableFileError,
    UnsupportedFormatError,
)

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def as_grid(values, *, name: str = "grid") -> np.ndarray:
    """Validate ``values`` as a finite 2-D grid and return a frozen float64 copy."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise EmptyImageError(f"{name} has zero dimensions {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or infinity")
    arr.setflags(write=False)
    return arr


def freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def normalize(grid: np.ndarray) -> np.ndarray:
    """Min-max rescale into [0, 1].

    A constant grid has no range to stretch; it is only clipped into [0, 1].
    Applying ``normalize`` to its own output returns the same values.
    """
    arr = np.asarray(grid, dtype=np.float64)
    lo, hi = float(arr.min()), float(arr.max())
    if hi > lo:
        out = (arr - lo) / (hi - lo)
        # guard the endpoints against rounding so a second pass is a no-op
        out = np.clip(out, 0.0, 1.0)
    else:
        out = np.clip(arr, 0.0, 1.0)
    return freeze(out)


# -- reading -----------------------------------------------------------------

def _parse_pgm(data: bytes, path) -> np.ndarray:
    tokens: list[bytes] = []
    pos = 0
    n = len(data)
    # magic, width, height, maxval, each separated by whitespace, '#' comments allowed
    while len(tokens) < 4:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise UnreadableFileError(f"unreadable file: truncated PGM header in {path}")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    if pos >= n or not data[pos : pos + 1].isspace():
        if pos >= n and tokens[0] == b"P5":
            raise UnreadableFileError(f"unreadable file: no pixel data in {path}")
        raise UnreadableFileError(f"unreadable file: malformed PGM header in {path}")
    pos += 1

    magic, *dims = tokens
    if magic != b"P5":
        raise UnreadableFileError(f"unreadable file: {path} is not a binary PGM (P5)")
    try:
        width, height, maxval = (int(t) for t in dims)
    except ValueError:
        raise UnreadableFileError(f"unreadable file: non-numeric PGM header in {path}") from None
    if width <= 0 or height <= 0:
        raise EmptyImageError(f"zero dimensions {width}x{height} in {path}")
    if maxval != 255:
        raise UnsupportedFormatError(
            f"unsupported bit depth: maxval {maxval} in {path} (only 8-bit, maxval 255)"
        )
    raster = data[pos : pos + width * height]
    if len(raster) < width * height:
        raise UnreadableFileError(
            f"unreadable file: {path} holds {len(raster)} of {width * height} pixel bytes"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width)


def _read_png(path) -> np.ndarray:
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            if mode in ("L", "LA"):
                arr = np.asarray(im.getchannel(0), dtype=np.float64)
            elif mode in ("RGB", "RGBA"):
                rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
                arr = (rgb[..., 0] + rgb[..., 1] + rgb[..., 2]) / 3.0
            else:
                raise UnsupportedFormatError(
                    f"unsupported bit depth: PNG mode {mode!r} in {path} (only 8-bit gray/RGB)"
                )
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise UnreadableFileError(f"unreadable file: {path}: {exc}") from exc
    if arr.size == 0:
        raise EmptyImageError(f"zero dimensions in {path}")
    return arr


def read_gray8(path) -> np.ndarray:
    """Raw 8-bit intensities of a PGM or PNG file as a float array in [0, 255]."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UnreadableFileError(f"unreadable file: {path}: {exc.strerror}") from exc
    if data.startswith(PNG_SIGNATURE):
        return _read_png(path)
    return _parse_pgm(data, path).astype(np.float64)


def load_image(path) -> np.ndarray:
    """Load an 8-bit grayscale PGM (P5) or PNG and scale it into [0, 1] by 1/255.

    RGB PNGs are collapsed to gray by the channel mean before scaling.
    """
    return freeze(read_gray8(path) / 255.0)


def load_mask(path) -> np.ndarray:
    """Read a 0/255 mask image as a {-1, +1} field."""
    raw = read_gray8(path)
    bad = (raw != 0) & (raw != 255)
    if bad.any():
        value = raw[bad].flat[0]
        raise NonBinaryMaskError(f"non-binary mask: value {value:g} in {path}")
    return freeze(np.where(raw == 255, 1.0, -1.0))


# -- writing -----------------------------------------------------------------

def _write_bytes(path, payload: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc.strerror}") from exc


def pgm_bytes(pixels: np.ndarray) -> bytes:
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    height, width = pixels.shape
    return b"P5\n%d %d\n255\n" % (width, height) + pixels.tobytes()


def save_pgm(pixels: np.ndarray, path) -> None:
    """Write an already-quantized uint8 array as binary PGM."""
    _write_bytes(path, pgm_bytes(pixels))


def quantize(grid: np.ndarray) -> np.ndarray:
    """Map [0, 1] intensities to the nearest 8-bit level."""
    return np.rint(np.clip(grid, 0.0, 1.0) * 255.0).astype(np.uint8)


def save_image(grid: np.ndarray, path) -> None:
    save_pgm(quantize(grid), path)


def check_binary(mask, *, name: str = "mask") -> np.ndarray:
    arr = np.asarray(mask, dtype=np.float64)
    if not np.all((arr == 1.0) | (arr == -1.0)):
        raise NonBinaryMaskError(f"non-binary {name}: values outside {{-1, +1}}")
    return arr


def save_mask(mask, path) -> None:
    """Write a {-1, +1} field as PGM with +1 -> 255 and -1 -> 0."""
    arr = check_binary(mask)
    if arr.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {arr.shape}")
    save_pgm(np.where(arr > 0, 255, 0).astype(np.uint8), path)


def _fmt(v: float) -> str:
    # shortest repr that round-trips the double; "2.0" printed as "2"
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def field_text(field) -> str:
    arr = np.asarray(field, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"field must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("field contains NaN or infinity")
    height, width = arr.shape
    lines = [f"{width} {height}"]
    lines.extend(" ".join(_fmt(v) for v in row) for row in arr)
    return "\n".join(lines) + "\n"


def save_field(field, path) -> None:
    """Write a plain-text field: ``"width height"`` then one line per row.

    Values are printed in round-trip precision, so ``load_field`` recovers the
    exact doubles.  A non-finite field is rejected before the file is touched.
    """
    _write_bytes(path, field_text(field).encode("ascii"))


def load_field(path) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise UnreadableFileError(f"unreadable file: {path}: {exc}") from exc
    lines = text.splitlines()
    try:
        width, height = (int(t) for t in lines[0].split())
        rows = [[float(t) for t in line.split()] for line in lines[1 : 1 + height]]
        arr = np.array(rows, dtype=np.float64)
    except (IndexError, ValueError) as exc:
        raise UnreadableFileError(f"unreadable file: malformed field file {path}") from exc
    if arr.shape != (height, width):
        raise UnreadableFileError(
            f"unreadable file: {path} declares {width}x{height}, holds {arr.shape[::-1]}"
        )
    return as_grid(arr, name=os.fspath(path))
