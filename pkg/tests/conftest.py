import numpy as np
import pytest

from pcdm import pipeline


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def synthetic_image(height, width, seed=0, texture=True):
    """Deterministic colorful test image: smooth color fields plus an
    optional high-frequency texture component."""
    r = np.random.default_rng(seed)
    # smooth fields: coarse noise upsampled bilinearly
    coarse = r.random((8, 8, 3))
    ys = np.linspace(0, 7, height)
    xs = np.linspace(0, 7, width)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, 7)
    x1 = np.minimum(x0 + 1, 7)
    wy = (ys - y0)[:, None, None]
    wx = (xs - x0)[None, :, None]
    img = (
        coarse[np.ix_(y0, x0)] * (1 - wy) * (1 - wx)
        + coarse[np.ix_(y1, x0)] * wy * (1 - wx)
        + coarse[np.ix_(y0, x1)] * (1 - wy) * wx
        + coarse[np.ix_(y1, x1)] * wy * wx
    )
    if texture:
        img = img + 0.15 * r.random((height, width, 3))
    img = (img - img.min()) / (img.max() - img.min())
    return (img * 255).astype(np.uint8)


def add_gaussian_noise(img, sigma, seed=0):
    r = np.random.default_rng(seed)
    noisy = img.astype(np.float64) + r.normal(0.0, sigma, img.shape)
    return np.clip(np.floor(noisy + 0.5), 0, 255).astype(np.uint8)


# Verdict lines appended by the acceptance tests; echoed after the run
# so they survive pytest's output capture.
ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.line(line)


@pytest.fixture(scope="session")
def small_config():
    """Coarse-table config; keeps per-test EMD work small."""
    return pipeline.default_config(bins=8)


@pytest.fixture(scope="session")
def default_config():
    return pipeline.default_config()
