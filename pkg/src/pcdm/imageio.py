"""Raster image input/output.

Images are plain ``uint8`` numpy arrays of shape (H, W, 3), RGB channel
order. Supported containers: PNG (8/16-bit, no alpha), BMP (24-bit) and
binary PPM (P6). Distortion maps are exported as 8-bit grayscale PNG.
"""

import os

import cv2
import numpy as np

from .errors import CorruptData, UnsupportedFormat, ValueOutOfRange

_READ_EXTS = {".png", ".bmp", ".ppm"}
_WRITE_EXTS = {".png", ".bmp", ".ppm"}


def _round_half_up(x):
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


def load_image(path) -> np.ndarray:
    """Decode an image file into an (H, W, 3) uint8 RGB array.

    16-bit sources are rescaled to 8 bit with round-half-up of
    v * 255 / 65535. Images carrying an alpha channel are rejected.
    """
    path = os.fspath(path)
    ext = os.path.splitext(path)[1].lower()
    if ext not in _READ_EXTS:
        raise UnsupportedFormat(f"unsupported image extension {ext!r}: {path}")
    if not os.path.isfile(path):
        raise FileNotFoundError(path)
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise CorruptData(f"could not decode {path}")
    if raw.ndim == 3 and raw.shape[2] == 4:
        raise UnsupportedFormat(f"alpha channel not supported: {path}")
    if raw.ndim == 2:
        raw = np.stack([raw, raw, raw], axis=-1)
    elif raw.ndim != 3 or raw.shape[2] != 3:
        raise CorruptData(f"unexpected pixel layout {raw.shape} in {path}")
    else:
        raw = raw[:, :, ::-1]  # BGR -> RGB
    if raw.dtype == np.uint16:
        raw = _round_half_up(raw.astype(np.float64) * (255.0 / 65535.0)).astype(np.uint8)
    elif raw.dtype != np.uint8:
        raise UnsupportedFormat(f"unsupported sample type {raw.dtype} in {path}")
    if raw.shape[0] < 1 or raw.shape[1] < 1:
        raise CorruptData(f"empty image {path}")
    return np.ascontiguousarray(raw)


def save_image(img: np.ndarray, path) -> None:
    """Write an (H, W, 3) uint8 RGB array as PNG, BMP or PPM per extension.

    Round-trips bit-exactly with :func:`load_image`.
    """
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise ValueOutOfRange("save_image expects an (H, W, 3) uint8 array")
    path = os.fspath(path)
    ext = os.path.splitext(path)[1].lower()
    if ext not in _WRITE_EXTS:
        raise UnsupportedFormat(f"unsupported output extension {ext!r}: {path}")
    ok = cv2.imwrite(path, np.ascontiguousarray(img[:, :, ::-1]))
    if not ok:
        raise OSError(f"failed to write {path}")


def save_grayscale_map(values: np.ndarray, path) -> None:
    """Write a [0, 1] map as an 8-bit grayscale PNG, pixel = round(v * 255)."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueOutOfRange("map must be a 2-D array")
    if not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0:
        raise ValueOutOfRange("map values must lie in [0, 1]")
    path = os.fspath(path)
    if os.path.splitext(path)[1].lower() != ".png":
        raise UnsupportedFormat(f"grayscale maps are written as .png, got {path}")
    gray = _round_half_up(values * 255.0).astype(np.uint8)
    ok = cv2.imwrite(path, gray)
    if not ok:
        raise OSError(f"failed to write {path}")
