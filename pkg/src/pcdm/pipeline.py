"""The perceptual color-difference pipeline.

Both images are downsampled, converted to Lab and labeled with
color-naming descriptors. Per aligned pixel pair, a thresholded and
normalized CIEDE2000 term is fused with the earth mover's distance
between the two descriptors through a logistic squashing:

    D = alpha * min(dE00, T) / T + (1 - alpha) * EMD
    map value = 1 / (1 + exp(-z * (D - 1/2)))

The map mean is the score; high score means low quality, so the
residual 1 - score is what gets compared against reference images.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .colorspace import delta_e_2000, srgb_to_lab
from .emd import emd_cost
from .errors import DimensionMismatch, ValueOutOfRange
from .naming import (
    NamingTable,
    default_vocabulary,
    fallback_table,
    ground_distance,
    image_bin_indices,
)
from .resample import downsample


@dataclass
class PcdmConfig:
    """Pipeline knobs plus the naming table and ground-distance matrix."""

    table: NamingTable
    ground: np.ndarray
    sampling_rate: float = 0.05
    alpha: float = 0.5
    z: float = 10.0
    de_threshold: float = 7.0

    def __post_init__(self):
        if not 0.0 < self.sampling_rate <= 1.0:
            raise ValueOutOfRange("sampling_rate must be in (0, 1]")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueOutOfRange("alpha must be in [0, 1]")
        if self.z <= 0.0:
            raise ValueOutOfRange("z must be positive")
        if self.de_threshold <= 0.0:
            raise ValueOutOfRange("de_threshold must be positive")
        self.ground = np.asarray(self.ground, dtype=np.float64)
        if self.ground.shape != (self.table.n_terms, self.table.n_terms):
            raise ValueOutOfRange("ground matrix must be N x N for the table's N")


@dataclass(frozen=True)
class PcdmResult:
    """Pooled score (mean of the map) and its residual 1 - score."""

    score: float
    residual: float


@lru_cache(maxsize=4)
def _default_table_and_ground(bins: int):
    vocab = default_vocabulary()
    return fallback_table(vocab, bins=bins), ground_distance(vocab)


def default_config(bins: int = 32, **kwargs) -> PcdmConfig:
    """Config backed by the deterministic fallback naming table."""
    table, ground = _default_table_and_ground(bins)
    return PcdmConfig(table=table, ground=ground, **kwargs)


def make_config(table: NamingTable, ground=None, **kwargs) -> PcdmConfig:
    """Config for an externally loaded naming table.

    When ``ground`` is omitted it is derived from the table itself
    (responsibility-weighted prototypes, normalized pairwise dE00).
    """
    if ground is None:
        from .naming import derive_prototypes

        ground = ground_distance(derive_prototypes(table))
    return PcdmConfig(table=table, ground=ground, **kwargs)


def logistic_fusion(de_norm, emd_cost, alpha: float, z: float):
    """Eq-style fusion of the two normalized difference terms."""
    d = alpha * np.asarray(de_norm) + (1.0 - alpha) * np.asarray(emd_cost)
    return 1.0 / (1.0 + np.exp(-z * (d - 0.5)))


def pixel_difference(s1, s2, p1, p2, cfg: PcdmConfig) -> float:
    """Fused difference in (0, 1) for one pixel pair.

    ``s1``/``s2`` are Lab colors, ``p1``/``p2`` descriptors on the
    simplex.
    """
    de = float(delta_e_2000(s1, s2))
    de_norm = min(de, cfg.de_threshold) / cfg.de_threshold
    cost = emd_cost(p1, p2, cfg.ground)
    return float(logistic_fusion(de_norm, cost, cfg.alpha, cfg.z))


def _emd_costs_for_bins(idx_a: np.ndarray, idx_b: np.ndarray, cfg: PcdmConfig) -> np.ndarray:
    """Per-pixel EMD cost, solved once per unique (bin, bin) pair.

    Keys are order-canonicalized: the ground matrix is symmetric, so
    EMD(p, q) = EMD(q, p) and canonicalization makes swapping the two
    images bit-identical.
    """
    lo = np.minimum(idx_a, idx_b)
    hi = np.maximum(idx_a, idx_b)
    keys = lo.astype(np.int64) * (cfg.table.bins**3) + hi
    uniq, inverse = np.unique(keys, return_inverse=True)
    probs = cfg.table.probs
    bins3 = cfg.table.bins**3
    costs = np.empty(uniq.shape[0])
    for k, key in enumerate(uniq):
        i = int(key // bins3)
        j = int(key % bins3)
        if i == j:
            costs[k] = 0.0
        else:
            costs[k] = emd_cost(probs[i], probs[j], cfg.ground)
    return costs[inverse].reshape(idx_a.shape)


def pcdm_map(ref: np.ndarray, dist: np.ndarray, cfg: PcdmConfig | None = None) -> np.ndarray:
    """Distortion map over the downsampled grid; values in (0, 1)."""
    if cfg is None:
        cfg = default_config()
    ref = np.asarray(ref)
    dist = np.asarray(dist)
    if ref.shape != dist.shape:
        raise DimensionMismatch(f"image shapes differ: {ref.shape} vs {dist.shape}")
    ref_s = downsample(ref, cfg.sampling_rate)
    dist_s = downsample(dist, cfg.sampling_rate)

    de = delta_e_2000(srgb_to_lab(ref_s), srgb_to_lab(dist_s))
    de_norm = np.minimum(de, cfg.de_threshold) / cfg.de_threshold

    idx_ref = image_bin_indices(cfg.table, ref_s)
    idx_dist = image_bin_indices(cfg.table, dist_s)
    cost = _emd_costs_for_bins(idx_ref, idx_dist, cfg)

    return logistic_fusion(de_norm, cost, cfg.alpha, cfg.z)


def pcdm_score(ref: np.ndarray, dist: np.ndarray, cfg: PcdmConfig | None = None) -> PcdmResult:
    """Pooled score: arithmetic mean of the distortion map."""
    score = float(pcdm_map(ref, dist, cfg).mean())
    return PcdmResult(score=score, residual=1.0 - score)
