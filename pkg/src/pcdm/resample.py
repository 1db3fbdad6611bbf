"""Bicubic image downsampling with anti-aliasing.

Separable resize using the Keys cubic kernel (a = -0.5). When shrinking,
the kernel support is widened by 1/scale and the weights renormalized,
which low-passes the signal before decimation (the usual anti-aliased
"imresize" behavior). Sample positions follow the half-pixel-center
convention: u = (i + 0.5) / scale - 0.5. Borders replicate.
"""

import numpy as np

from .errors import ValueOutOfRange


def _cubic(x):
    """Keys bicubic kernel with a = -0.5, support [-2, 2]."""
    ax = np.abs(x)
    ax2 = ax * ax
    ax3 = ax2 * ax
    return np.where(
        ax <= 1.0,
        1.5 * ax3 - 2.5 * ax2 + 1.0,
        np.where(ax < 2.0, -0.5 * ax3 + 2.5 * ax2 - 4.0 * ax + 2.0, 0.0),
    )


def output_length(in_len: int, rate: float) -> int:
    """Target length: max(1, round-half-up(in_len * rate))."""
    return max(1, int(np.floor(in_len * rate + 0.5)))


def _contributions(in_len: int, out_len: int):
    """Per-output-sample source indices and normalized weights."""
    scale = out_len / in_len
    if scale < 1.0:
        width = 4.0 / scale

        def kernel(x):
            return scale * _cubic(scale * x)

    else:
        width = 4.0
        kernel = _cubic

    u = (np.arange(out_len) + 0.5) / scale - 0.5
    left = np.floor(u - width / 2.0)
    p = int(np.ceil(width)) + 2
    ind = left[:, None] + np.arange(p)[None, :]
    weights = kernel(u[:, None] - ind)
    weights /= weights.sum(axis=1, keepdims=True)
    ind = np.clip(ind, 0, in_len - 1).astype(np.int64)  # replicate border

    keep = np.any(weights != 0.0, axis=0)
    return ind[:, keep], weights[:, keep]


def _resize_axis(data: np.ndarray, out_len: int, axis: int) -> np.ndarray:
    ind, weights = _contributions(data.shape[axis], out_len)
    moved = np.moveaxis(data, axis, 0)
    out = np.einsum("ow,ow...->o...", weights, moved[ind])
    return np.moveaxis(out, 0, axis)


def downsample(img: np.ndarray, rate: float) -> np.ndarray:
    """Resize an (H, W, 3) uint8 image by ``rate`` in both dimensions.

    ``rate`` must lie in (0, 1]; rate 1 returns the input unchanged.
    Output is quantized back to uint8 with round-half-up.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueOutOfRange(f"sampling rate must be in (0, 1], got {rate}")
    img = np.asarray(img)
    if rate == 1.0:
        return img
    h = output_length(img.shape[0], rate)
    w = output_length(img.shape[1], rate)
    out = _resize_axis(img.astype(np.float64), h, axis=0)
    out = _resize_axis(out, w, axis=1)
    return np.clip(np.floor(out + 0.5), 0.0, 255.0).astype(np.uint8)
