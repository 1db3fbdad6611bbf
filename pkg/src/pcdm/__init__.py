"""Full-reference image quality assessment with perceptual color difference.

Core entry points:

- :func:`pcdm.pipeline.pcdm_score` / :func:`pcdm.pipeline.pcdm_map` —
  the fused color-difference metric
- :mod:`pcdm.baselines` — PSNR, SSIM, mean CIEDE2000
- :mod:`pcdm.evaluation` — manifest-driven DMOS evaluation harness
"""

from .baselines import mean_de2000, psnr, ssim
from .colorspace import delta_e_2000, srgb_to_lab
from .emd import emd
from .imageio import load_image, save_grayscale_map, save_image
from .naming import (
    ColorVocabulary,
    NamingTable,
    default_vocabulary,
    fallback_table,
    ground_distance,
    load_naming_table,
)
from .pipeline import PcdmConfig, default_config, make_config, pcdm_map, pcdm_score
from .resample import downsample

__version__ = "0.1.0"

__all__ = [
    "ColorVocabulary",
    "NamingTable",
    "PcdmConfig",
    "default_config",
    "default_vocabulary",
    "delta_e_2000",
    "downsample",
    "emd",
    "fallback_table",
    "ground_distance",
    "load_image",
    "load_naming_table",
    "make_config",
    "mean_de2000",
    "pcdm_map",
    "pcdm_score",
    "psnr",
    "save_grayscale_map",
    "save_image",
    "srgb_to_lab",
    "ssim",
]
