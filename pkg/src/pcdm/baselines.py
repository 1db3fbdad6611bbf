"""Reference metrics: PSNR, single-scale SSIM and mean CIEDE2000."""

import numpy as np
from scipy.signal import convolve2d

from .colorspace import delta_e_2000, luma, srgb_to_lab
from .errors import DimensionMismatch, TooSmall

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_L = 255.0


def _check_pair(ref, dist):
    ref = np.asarray(ref)
    dist = np.asarray(dist)
    if ref.shape != dist.shape:
        raise DimensionMismatch(f"image shapes differ: {ref.shape} vs {dist.shape}")
    return ref, dist


def psnr(ref, dist) -> float:
    """Peak signal-to-noise ratio on unquantized BT.601 luma, in dB.

    Identical images return +inf.
    """
    ref, dist = _check_pair(ref, dist)
    err = luma(ref) - luma(dist)
    mse = float(np.mean(err * err))
    if mse == 0.0:
        return float("inf")
    return 10.0 * np.log10(SSIM_L**2 / mse)


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    ax = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(ax**2) / (2.0 * sigma**2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(ref, dist):
    """Single-scale SSIM on luma.

    11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03, L=255,
    valid-region convolution: the returned map is smaller than the
    input by the window minus one in each dimension. Returns
    (mean score, map).
    """
    ref, dist = _check_pair(ref, dist)
    x = luma(ref)
    y = luma(dist)
    if min(x.shape) < SSIM_WINDOW:
        raise TooSmall(f"images must be at least {SSIM_WINDOW} pixels in each dimension")
    w = _gaussian_window(SSIM_WINDOW, SSIM_SIGMA)
    c1 = (SSIM_K1 * SSIM_L) ** 2
    c2 = (SSIM_K2 * SSIM_L) ** 2

    mu_x = convolve2d(x, w, mode="valid")
    mu_y = convolve2d(y, w, mode="valid")
    sxx = convolve2d(x * x, w, mode="valid") - mu_x * mu_x
    syy = convolve2d(y * y, w, mode="valid") - mu_y * mu_y
    sxy = convolve2d(x * y, w, mode="valid") - mu_x * mu_y

    num = (2.0 * mu_x * mu_y + c1) * (2.0 * sxy + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (sxx + syy + c2)
    smap = num / den
    return float(smap.mean()), smap


def mean_de2000(ref, dist) -> float:
    """Arithmetic mean of per-pixel CIEDE2000 at full resolution."""
    ref, dist = _check_pair(ref, dist)
    return float(delta_e_2000(srgb_to_lab(ref), srgb_to_lab(dist)).mean())
