import cv2
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ecgi.errors import RoiOutOfBounds, TooSmall, UnreadableFile, UnsupportedFormat
from ecgi.imaging import RoiRect, crop_roi, load_image, to_luminance


def write(path, rgb):
    assert cv2.imwrite(str(path), np.ascontiguousarray(rgb[..., ::-1]))
    return path


def test_load_too_small(tmp_path):
    p = write(tmp_path / "tiny.png", np.full((2, 2, 3), 255, np.uint8))
    with pytest.raises(TooSmall):
        load_image(p)


@pytest.mark.parametrize("byte, expected", [(255, 1.0), (128, 128 / 255)])
def test_load_scaling_8bit(tmp_path, byte, expected):
    img = load_image(write(tmp_path / "x.png", np.full((4, 4, 3), byte, np.uint8)))
    assert img.shape == (4, 4, 3)
    assert np.all(img == expected)


def test_load_16bit(tmp_path):
    raw = np.zeros((4, 5, 3), np.uint16)
    raw[..., 0] = 65535
    raw[..., 2] = 1000
    img = load_image(write(tmp_path / "deep.png", raw))
    assert np.all(img[..., 0] == 1.0)
    assert np.all(img[..., 1] == 0.0)
    assert np.allclose(img[..., 2], 1000 / 65535)


def test_load_channel_order_and_alpha(tmp_path):
    bgra = np.zeros((3, 3, 4), np.uint8)
    bgra[..., 2] = 255  # red in OpenCV order
    bgra[..., 3] = 7
    cv2.imwrite(str(tmp_path / "a.png"), bgra)
    img = load_image(tmp_path / "a.png")
    assert img.shape == (3, 3, 3)
    assert np.all(img[..., 0] == 1.0) and np.all(img[..., 1:] == 0.0)


def test_load_bmp_and_jpeg(tmp_path):
    rgb = np.full((8, 8, 3), 200, np.uint8)
    for name in ("x.bmp", "x.jpg"):
        img = load_image(write(tmp_path / name, rgb))
        assert img.shape == (8, 8, 3)
        assert np.allclose(img, 200 / 255, atol=3 / 255)


def test_load_rejects_grayscale(tmp_path):
    cv2.imwrite(str(tmp_path / "g.png"), np.zeros((5, 5), np.uint8))
    with pytest.raises(UnsupportedFormat):
        load_image(tmp_path / "g.png")


def test_load_errors(tmp_path):
    with pytest.raises(UnreadableFile):
        load_image(tmp_path / "missing.png")
    (tmp_path / "junk.png").write_bytes(b"not an image at all")
    with pytest.raises(UnsupportedFormat):
        load_image(tmp_path / "junk.png")


def test_load_deterministic_and_readonly(tmp_path, rng):
    p = write(tmp_path / "r.png", rng.integers(0, 256, (6, 7, 3), dtype=np.uint8))
    a, b = load_image(p), load_image(p)
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        a[0, 0, 0] = 0.5


def test_crop_identity(rng):
    img = rng.random((10, 12, 3))
    assert np.array_equal(crop_roi(img, RoiRect(0, 0, 12, 10)), img)


def test_crop_offset(rng):
    img = rng.random((10, 10, 3))
    out = crop_roi(img, RoiRect(2, 3, 4, 4))
    assert out.shape == (4, 4, 3)
    # x is the column offset, y the row offset
    assert np.array_equal(out[0, 0], img[3, 2])
    assert np.array_equal(out, img[3:7, 2:6])


@pytest.mark.parametrize("roi", [RoiRect(8, 8, 4, 4), RoiRect(-1, 0, 4, 4), RoiRect(0, 0, 2, 5)])
def test_crop_out_of_bounds(rng, roi):
    with pytest.raises(RoiOutOfBounds):
        crop_roi(rng.random((10, 10, 3)), roi)


def test_roi_parse():
    assert RoiRect.parse("10, 20,64,64") == RoiRect(10, 20, 64, 64)
    with pytest.raises(ValueError):
        RoiRect.parse("1,2,3")


@pytest.mark.parametrize("pixel, expected", [((1, 1, 1), 1.0), ((0, 0, 0), 0.0), ((1, 0, 0), 0.299)])
def test_luminance_examples(pixel, expected):
    img = np.broadcast_to(np.array(pixel, float), (3, 3, 3))
    assert np.allclose(to_luminance(img), expected, rtol=0, atol=1e-15)


unit_images = arrays(np.float64, (3, 4, 3), elements=st.floats(0, 1))


@given(unit_images, st.integers(0, 2), st.floats(0, 1))
def test_luminance_bounded_and_monotone(img, channel, bump):
    lum = to_luminance(img)
    assert np.all(lum >= 0) and np.all(lum <= 1 + 1e-12)
    brighter = img.copy()
    brighter[..., channel] = np.maximum(brighter[..., channel], bump)
    assert np.all(to_luminance(brighter) >= lum)
