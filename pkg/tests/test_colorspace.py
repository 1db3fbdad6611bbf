import numpy as np
import pytest

from pcdm.colorspace import delta_e_2000, luma, rgb_to_ycbcr, srgb_to_lab, ycbcr_to_rgb
from pcdm.errors import ValueOutOfRange

from _ciede2000_reference import CONFORMANCE_PAIRS
from _oracles import reference_de2000, reference_srgb_to_lab


class TestSrgbToLab:
    def test_white_maps_to_reference_white(self):
        lab = srgb_to_lab(np.array([255, 255, 255]))
        assert lab[0] == pytest.approx(100.0, abs=1e-4)
        assert abs(lab[1]) < 0.01 and abs(lab[2]) < 0.01

    def test_black(self):
        assert np.allclose(srgb_to_lab(np.array([0, 0, 0])), [0.0, 0.0, 0.0])

    def test_red_matches_independent_reference(self):
        got = srgb_to_lab(np.array([255, 0, 0]))
        ref = reference_srgb_to_lab(np.array([255, 0, 0]))
        assert np.allclose(got, ref, atol=1e-3)

    def test_random_pixels_match_reference(self, rng):
        # the two paths use independently rounded sRGB matrices; they
        # agree to ~5e-3 on the opponent axes
        img = rng.integers(0, 256, (17, 13, 3), dtype=np.uint8)
        assert np.allclose(srgb_to_lab(img), reference_srgb_to_lab(img), atol=2e-2)

    def test_gray_lightness_monotone(self):
        grays = np.stack([np.arange(256)] * 3, axis=-1)
        L = srgb_to_lab(grays)[:, 0]
        assert np.all(np.diff(L) > 0)

    def test_in_gamut_lightness_range(self, rng):
        img = rng.integers(0, 256, (100, 3), dtype=np.uint8)
        L = srgb_to_lab(img)[:, 0]
        assert L.min() >= -1e-9 and L.max() <= 100.0 + 1e-6


class TestDeltaE2000:
    @pytest.mark.parametrize("lab1,lab2,expected", CONFORMANCE_PAIRS)
    def test_conformance_pairs(self, lab1, lab2, expected):
        assert float(delta_e_2000(np.array(lab1), np.array(lab2))) == pytest.approx(
            expected, abs=1e-4
        )

    def test_identity(self, rng):
        labs = rng.uniform([0, -80, -80], [100, 80, 80], (50, 3))
        assert np.all(delta_e_2000(labs, labs) == 0.0)

    def test_symmetry_and_nonnegativity(self, rng):
        a = rng.uniform([0, -80, -80], [100, 80, 80], (200, 3))
        b = rng.uniform([0, -80, -80], [100, 80, 80], (200, 3))
        ab = delta_e_2000(a, b)
        ba = delta_e_2000(b, a)
        assert np.array_equal(ab, ba)
        assert np.all(ab >= 0.0)

    def test_random_pairs_match_reference(self, rng):
        a = rng.uniform([0, -80, -80], [100, 80, 80], (500, 3))
        b = rng.uniform([0, -80, -80], [100, 80, 80], (500, 3))
        assert np.allclose(delta_e_2000(a, b), reference_de2000(a, b), atol=1e-9)

    def test_zero_chroma_hue_defined(self):
        # C' = 0 on one side must not produce NaN
        v = delta_e_2000(np.array([50.0, 0.0, 0.0]), np.array([60.0, 0.0, 0.0]))
        assert np.isfinite(v)

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(ValueOutOfRange):
            delta_e_2000(np.zeros(3), np.zeros(3), kl=0.0)


class TestYCbCr:
    def test_gray_is_chroma_neutral(self):
        ycc = rgb_to_ycbcr(np.array([128, 128, 128]))
        assert np.allclose(ycc, [128.0, 128.0, 128.0])

    def test_black(self):
        assert np.allclose(rgb_to_ycbcr(np.array([0, 0, 0])), [0.0, 128.0, 128.0])

    def test_round_trip_within_one(self, rng):
        rgb = rng.integers(0, 256, (100_000, 3), dtype=np.uint8)
        back = ycbcr_to_rgb(rgb_to_ycbcr(rgb))
        assert np.max(np.abs(back.astype(int) - rgb.astype(int))) <= 1

    def test_luma_matches_y_plane(self, rng):
        rgb = rng.integers(0, 256, (10, 10, 3), dtype=np.uint8)
        assert np.allclose(luma(rgb), rgb_to_ycbcr(rgb)[..., 0])
