import numpy as np
import pytest
from PIL import Image

from pcdm.errors import CorruptData, UnsupportedFormat, ValueOutOfRange
from pcdm.imageio import load_image, save_grayscale_map, save_image


def test_decode_handwritten_ppm(tmp_path):
    p = tmp_path / "two.ppm"
    p.write_bytes(b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 0, 255]))
    img = load_image(p)
    assert img.shape == (1, 2, 3)
    assert tuple(img[0, 0]) == (255, 0, 0)
    assert tuple(img[0, 1]) == (0, 0, 255)


def test_decode_white_png_written_by_pil(tmp_path):
    p = tmp_path / "white.png"
    Image.new("RGB", (1, 1), (255, 255, 255)).save(p)
    img = load_image(p)
    assert img.shape == (1, 1, 3)
    assert tuple(img[0, 0]) == (255, 255, 255)


@pytest.mark.parametrize("ext", ["png", "bmp", "ppm"])
def test_round_trip_bit_exact(tmp_path, rng, ext):
    for trial in range(5):
        img = rng.integers(0, 256, (rng.integers(1, 20), rng.integers(1, 20), 3), dtype=np.uint8)
        p = tmp_path / f"t{trial}.{ext}"
        save_image(img, p)
        assert np.array_equal(load_image(p), img)


def test_loads_are_deterministic(tmp_path, rng):
    img = rng.integers(0, 256, (9, 7, 3), dtype=np.uint8)
    p = tmp_path / "x.png"
    save_image(img, p)
    assert np.array_equal(load_image(p), load_image(p))


def test_16bit_png_rescaled_by_rounding(tmp_path):
    import cv2

    vals = np.array([[[0, 257, 65535], [32768, 12345, 65278]]], dtype=np.uint16)
    p = tmp_path / "deep.png"
    cv2.imwrite(str(p), vals[:, :, ::-1])
    img = load_image(p)
    expected = np.floor(vals.astype(np.float64) * 255.0 / 65535.0 + 0.5).astype(np.uint8)
    assert np.array_equal(img, expected)


def test_alpha_rejected(tmp_path):
    p = tmp_path / "a.png"
    Image.new("RGBA", (2, 2), (1, 2, 3, 4)).save(p)
    with pytest.raises(UnsupportedFormat):
        load_image(p)


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        load_image("/nonexistent/abc.png")


def test_unsupported_extension(tmp_path):
    p = tmp_path / "f.xyz"
    p.write_bytes(b"junk")
    with pytest.raises(UnsupportedFormat):
        load_image(p)


def test_truncated_stream(tmp_path, rng):
    img = rng.integers(0, 256, (16, 16, 3), dtype=np.uint8)
    p = tmp_path / "ok.png"
    save_image(img, p)
    bad = tmp_path / "bad.png"
    bad.write_bytes(p.read_bytes()[:30])
    with pytest.raises(CorruptData):
        load_image(bad)


def test_save_unsupported_extension(tmp_path):
    with pytest.raises(UnsupportedFormat):
        save_image(np.zeros((1, 1, 3), np.uint8), tmp_path / "f.xyz")


def test_save_black_pixel(tmp_path):
    p = tmp_path / "b.png"
    save_image(np.zeros((1, 1, 3), np.uint8), p)
    assert tuple(load_image(p)[0, 0]) == (0, 0, 0)


class TestGrayscaleMap:
    def test_black_and_white(self, tmp_path):
        p0 = tmp_path / "zero.png"
        save_grayscale_map(np.zeros((4, 4)), p0)
        assert np.array_equal(np.asarray(Image.open(p0)), np.zeros((4, 4), np.uint8))
        p1 = tmp_path / "one.png"
        save_grayscale_map(np.ones((4, 4)), p1)
        assert np.array_equal(np.asarray(Image.open(p1)), np.full((4, 4), 255, np.uint8))

    def test_half_rounds_up(self, tmp_path):
        p = tmp_path / "half.png"
        save_grayscale_map(np.full((2, 2), 0.5), p)
        assert np.asarray(Image.open(p))[0, 0] == 128  # round(127.5) half-up

    def test_out_of_range(self, tmp_path):
        with pytest.raises(ValueOutOfRange):
            save_grayscale_map(np.array([[1.5]]), tmp_path / "v.png")
        with pytest.raises(ValueOutOfRange):
            save_grayscale_map(np.array([[-0.1]]), tmp_path / "v.png")
