import numpy as np
import pytest

from strokescreen.nn import build_model
from strokescreen.vision import (
    Image,
    ImageDepthError,
    ImageError,
    ImageMagicError,
    ImageTruncatedError,
    bilinear_resize,
    decode_image,
    encode_pgm,
    encode_ppm,
    median3x3,
    preprocess,
    retina_confidence,
    retina_layers,
)


class TestDecode:
    def test_p5_direct_scaling(self):
        img = decode_image(b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64]))
        assert img.pixels == pytest.approx([0, 128 / 255, 1.0, 64 / 255])

    def test_p6_luma_weights_sum_to_one(self):
        img = decode_image(b"P6\n1 1\n255\n" + bytes([255, 255, 255]))
        assert img.pixels[0] == pytest.approx(1.0)

    def test_p6_luma_mix(self):
        img = decode_image(b"P6\n1 1\n255\n" + bytes([255, 0, 0]))
        assert img.pixels[0] == pytest.approx(0.299)

    def test_p5_roundtrip_identical_bytes(self):
        rng = np.random.default_rng(0)
        img = Image(5, 4, rng.integers(0, 256, 20) / 255.0)
        data = encode_pgm(img)
        assert encode_pgm(decode_image(data)) == data

    def test_header_comments_tolerated(self):
        img = decode_image(b"P5\n# comment line\n2 1\n255\n" + bytes([7, 9]))
        assert img.width == 2 and img.height == 1

    def test_bad_magic(self):
        with pytest.raises(ImageMagicError):
            decode_image(b"P3\n1 1\n255\n000")

    def test_bad_maxval(self):
        with pytest.raises(ImageDepthError):
            decode_image(b"P5\n1 1\n65535\n\x00\x00")

    def test_truncated_payload(self):
        with pytest.raises(ImageTruncatedError):
            decode_image(b"P5\n4 4\n255\n" + bytes(7))

    def test_ppm_encoder(self):
        rgb = np.zeros((2, 3))
        rgb[0] = (1.0, 0.0, 0.0)
        data = encode_ppm(1, 2, rgb)
        img = decode_image(data)
        assert img.pixels == pytest.approx([0.299, 0.0])


class TestPreprocess:
    def test_constant_image_all_zero(self):
        t = preprocess(Image(16, 16, np.full(256, 0.7)))
        assert t.shape == (64, 64)
        assert np.all(t.array == 0.0)

    def test_salt_pixel_removed_by_median(self):
        flat = np.full((16, 16), 0.5)
        flat[8, 8] = 1.0
        cleaned = median3x3(flat)
        assert np.all(cleaned == 0.5)

    def test_median_idempotent_on_flat_regions(self):
        rng = np.random.default_rng(1)
        grid = np.repeat(np.repeat(rng.uniform(0, 1, (4, 4)), 4, axis=0), 4, axis=1)
        once = median3x3(grid)
        assert np.array_equal(median3x3(once), once)

    def test_standardized_to_unit_stdev(self):
        rng = np.random.default_rng(2)
        t = preprocess(Image(32, 32, rng.uniform(0, 1, 1024)))
        assert t.array.std() == pytest.approx(1.0, abs=1e-6)
        assert t.array.mean() == pytest.approx(0.0, abs=1e-9)

    def test_checkerboard_resize_matches_bilinear_oracle(self):
        side = 128
        yy, xx = np.mgrid[0:side, 0:side]
        grid = ((xx // 8 + yy // 8) % 2).astype(float)

        # independent per-pixel oracle on the pixel-center convention
        def oracle(g, oh, ow):
            ih, iw = g.shape
            out = np.zeros((oh, ow))
            for r in range(oh):
                for c in range(ow):
                    sy = (r + 0.5) * ih / oh - 0.5
                    sx = (c + 0.5) * iw / ow - 0.5
                    y0 = min(max(int(np.floor(sy)), 0), ih - 1)
                    x0 = min(max(int(np.floor(sx)), 0), iw - 1)
                    y1 = min(y0 + 1, ih - 1)
                    x1 = min(x0 + 1, iw - 1)
                    wy = min(max(sy - y0, 0.0), 1.0)
                    wx = min(max(sx - x0, 0.0), 1.0)
                    top = g[y0, x0] * (1 - wx) + g[y0, x1] * wx
                    bot = g[y1, x0] * (1 - wx) + g[y1, x1] * wx
                    out[r, c] = top * (1 - wy) + bot * wy
            return out

        got = bilinear_resize(grid, 64, 64)
        assert np.abs(got - oracle(grid, 64, 64)).max() < 1e-9

    def test_degenerate_size_rejected(self):
        with pytest.raises(ImageError):
            preprocess(Image(4, 4, np.zeros(16)))


class TestRetinaConfidence:
    def test_open_interval(self):
        model = build_model(retina_layers(), seed=0)
        rng = np.random.default_rng(3)
        img = Image(32, 32, rng.uniform(0, 1, 1024))
        assert 0.0 < retina_confidence(model, img) < 1.0

    def test_deterministic(self):
        model = build_model(retina_layers(), seed=0)
        rng = np.random.default_rng(4)
        img = Image(64, 64, rng.uniform(0, 1, 4096))
        assert retina_confidence(model, img) == retina_confidence(model, img)
