"""Color-naming descriptors.

Each pixel is labeled with a probability distribution over a small
vocabulary of basic color terms (11 by default). Lookups go through a
quantized RGB table: either an externally learned table loaded from
text, or a deterministic Gaussian fallback built from term prototypes.
The module also builds the perceived ground-distance matrix between
terms that weights the transportation cost.
"""

from dataclasses import dataclass

import numpy as np

from .colorspace import delta_e_2000, srgb_to_lab
from .errors import (
    DegenerateTerm,
    ParseError,
    SimplexViolation,
    ValueOutOfRange,
    WrongRowCount,
)

DEFAULT_TERMS = (
    "black",
    "blue",
    "brown",
    "grey",
    "green",
    "orange",
    "pink",
    "purple",
    "red",
    "white",
    "yellow",
)

# Representative sRGB anchor per term; prototypes are their Lab images.
_TERM_ANCHORS_RGB = {
    "black": (0, 0, 0),
    "blue": (0, 0, 255),
    "brown": (139, 69, 19),
    "grey": (128, 128, 128),
    "green": (0, 128, 0),
    "orange": (255, 165, 0),
    "pink": (255, 192, 203),
    "purple": (128, 0, 128),
    "red": (255, 0, 0),
    "white": (255, 255, 255),
    "yellow": (255, 255, 0),
}

SIMPLEX_TOL = 1e-3


@dataclass(frozen=True)
class ColorVocabulary:
    """Ordered color-term names with one Lab prototype per term."""

    terms: tuple
    prototypes: np.ndarray  # (N, 3) Lab

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueOutOfRange("vocabulary needs at least two terms")
        if len(set(self.terms)) != len(self.terms):
            raise ValueOutOfRange("term names must be unique")
        if self.prototypes.shape != (len(self.terms), 3):
            raise ValueOutOfRange("prototypes must be (N, 3) Lab")

    @property
    def size(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class NamingTable:
    """Quantized RGB -> descriptor lookup table.

    ``probs`` has shape (bins**3, N); rows are indexed by
    r_idx * bins**2 + g_idx * bins + b_idx and live on the probability
    simplex.
    """

    bins: int
    probs: np.ndarray
    terms: tuple

    def __post_init__(self):
        if self.bins < 1:
            raise ValueOutOfRange("bins must be >= 1")
        if self.probs.shape != (self.bins**3, len(self.terms)):
            raise ValueOutOfRange("probs must be (bins**3, N)")
        if np.any(self.probs < 0):
            raise SimplexViolation("negative probability in naming table")
        sums = self.probs.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-9):
            raise SimplexViolation("table rows must sum to 1")

    @property
    def n_terms(self) -> int:
        return len(self.terms)


def default_vocabulary() -> ColorVocabulary:
    protos = srgb_to_lab(
        np.array([_TERM_ANCHORS_RGB[t] for t in DEFAULT_TERMS], dtype=np.float64)
    )
    return ColorVocabulary(terms=DEFAULT_TERMS, prototypes=protos)


def _generic_terms(n: int) -> tuple:
    if n == len(DEFAULT_TERMS):
        return DEFAULT_TERMS
    return tuple(f"term_{i}" for i in range(n))


def bin_index(values, bins: int) -> np.ndarray:
    """Quantize 8-bit channel values: idx = floor(v / (256 / bins))."""
    v = np.asarray(values, dtype=np.int64)
    return np.minimum(v * bins // 256, bins - 1)


def bin_centers(bins: int) -> np.ndarray:
    """RGB centers of all bins, shape (bins**3, 3), on the [0, 255] scale."""
    step = 256.0 / bins
    axis = (np.arange(bins) + 0.5) * step
    r, g, b = np.meshgrid(axis, axis, axis, indexing="ij")
    return np.stack([r.ravel(), g.ravel(), b.ravel()], axis=-1)


def load_naming_table(path, terms=None) -> NamingTable:
    """Load a learned naming table from its text format.

    One row per bin: ``r_idx g_idx b_idx p_1 ... p_N``,
    whitespace-separated; row count must equal bins**3. Rows are
    renormalized onto the simplex when their sum is within 1e-3 of 1,
    otherwise the row is rejected.
    """
    try:
        data = np.loadtxt(path, dtype=np.float64, ndmin=2)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise ParseError(f"cannot parse naming table {path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] < 5:
        raise ParseError("expected rows of 'r g b p_1 ... p_N' with N >= 2")
    n_rows = data.shape[0]
    bins = round(n_rows ** (1.0 / 3.0))
    if bins**3 != n_rows:
        raise WrongRowCount(f"{n_rows} rows is not a cube; expected bins**3")
    n = data.shape[1] - 3
    idx = data[:, :3]
    if np.any(idx != np.floor(idx)) or idx.min() < 0 or idx.max() >= bins:
        raise ParseError("bin indices must be integers in [0, bins)")
    flat = (idx[:, 0].astype(np.int64) * bins + idx[:, 1].astype(np.int64)) * bins + idx[
        :, 2
    ].astype(np.int64)
    if len(np.unique(flat)) != n_rows:
        raise ParseError("duplicate bin index in naming table")
    probs = data[:, 3:]
    if np.any(probs < 0):
        raise SimplexViolation("negative probability in naming table row")
    sums = probs.sum(axis=1)
    bad = np.abs(sums - 1.0) > SIMPLEX_TOL
    if np.any(bad):
        row = int(np.argmax(bad))
        raise SimplexViolation(f"row {row} sums to {sums[row]:.6f}, outside 1 +/- {SIMPLEX_TOL}")
    ordered = np.empty_like(probs)
    ordered[flat] = probs / sums[:, None]
    return NamingTable(bins=bins, probs=ordered, terms=terms or _generic_terms(n))


def fallback_table(vocab: ColorVocabulary, sigma: float = 10.0, bins: int = 32) -> NamingTable:
    """Deterministic Gaussian substitute for the learned table.

    For each bin center c: probs[i] proportional to
    exp(-dE00(lab(c), prototype_i)^2 / (2 sigma^2)).
    """
    if sigma <= 0:
        raise ValueOutOfRange("sigma must be positive")
    centers_lab = srgb_to_lab(bin_centers(bins))  # (bins**3, 3)
    de = delta_e_2000(centers_lab[:, None, :], vocab.prototypes[None, :, :])
    logw = -(de**2) / (2.0 * sigma**2)
    logw -= logw.max(axis=1, keepdims=True)  # guard exp underflow to all-zero rows
    w = np.exp(logw)
    probs = w / w.sum(axis=1, keepdims=True)
    return NamingTable(bins=bins, probs=probs, terms=vocab.terms)


def describe_pixel(table: NamingTable, rgb) -> np.ndarray:
    """Descriptor of the bin containing one 8-bit RGB triple."""
    r, g, b = (int(v) for v in rgb)
    i = bin_index(np.array([r, g, b]), table.bins)
    flat = (i[0] * table.bins + i[1]) * table.bins + i[2]
    return table.probs[flat]


def image_bin_indices(table: NamingTable, img) -> np.ndarray:
    """Flat table index per pixel, shape (H, W)."""
    idx = bin_index(np.asarray(img), table.bins)
    return (idx[..., 0] * table.bins + idx[..., 1]) * table.bins + idx[..., 2]


def describe_image(table: NamingTable, img) -> np.ndarray:
    """Descriptors for every pixel of an (H, W, 3) uint8 image -> (H, W, N)."""
    return table.probs[image_bin_indices(table, img)]


def ground_distance(vocab: ColorVocabulary, threshold: float | None = None) -> np.ndarray:
    """Perceived distance matrix between terms, normalized to [0, 1].

    d[i][j] = min(dE00(proto_i, proto_j), threshold) / threshold.
    ``threshold=None`` uses the largest pairwise difference, i.e. pure
    normalization with no saturation.
    """
    de = delta_e_2000(vocab.prototypes[:, None, :], vocab.prototypes[None, :, :])
    de = 0.5 * (de + de.T)  # kill float asymmetry noise
    np.fill_diagonal(de, 0.0)
    if threshold is None:
        threshold = float(de.max())
    if threshold <= 0:
        raise ValueOutOfRange("threshold must be positive")
    d = np.minimum(de, threshold) / threshold
    assert np.allclose(d, d.T) and np.all(np.diag(d) == 0.0) and d.max() <= 1.0
    return d


def derive_prototypes(table: NamingTable) -> ColorVocabulary:
    """Vocabulary whose prototypes are the responsibility-weighted mean
    Lab coordinate of each term over all bin centers."""
    centers_lab = srgb_to_lab(bin_centers(table.bins))
    weights = table.probs  # (bins**3, N)
    totals = weights.sum(axis=0)
    dead = totals <= 0.0
    if np.any(dead):
        raise DegenerateTerm(f"terms with zero mass: {[table.terms[i] for i in np.flatnonzero(dead)]}")
    protos = (weights.T @ centers_lab) / totals[:, None]
    return ColorVocabulary(terms=table.terms, prototypes=protos)


def save_ground_distance_csv(d: np.ndarray, path) -> None:
    """Dump an N x N ground-distance matrix as CSV for inspection."""
    np.savetxt(path, np.asarray(d), delimiter=",", fmt="%.9f")
