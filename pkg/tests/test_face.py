import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strokescreen.face import (
    DEFAULT_REGIONS,
    FLIP,
    FaceRegions,
    LandmarkError,
    LandmarkSet,
    N_POINTS,
    displacement_features,
    format_landmarks,
    mirror_landmarks,
    normalize_shape,
    parse_landmarks,
    paralysis_confidence,
)
from strokescreen.synth import CorpusSpec, gen_face
from strokescreen.pipelines import train_face


def symmetric_face(rng) -> LandmarkSet:
    """Exactly mirror-symmetric about x = 0 by construction."""
    pts = np.zeros((N_POINTS, 2))
    for i in range(N_POINTS):
        j = FLIP[i]
        if i < j:
            x, y = rng.uniform(0.05, 1.0), rng.uniform(-1.0, 1.0)
            pts[i] = (-x, y)
            pts[j] = (x, y)
        elif i == j:
            pts[i] = (0.0, rng.uniform(-1.0, 1.0))
    return LandmarkSet(pts)


def pts_text(points) -> str:
    body = "\n".join(f"{x} {y}" for x, y in points)
    return f"version: 1\nn_points: {len(points)}\n{{\n{body}\n}}\n"


class TestParse:
    def test_valid_file_order_preserved(self):
        rng = np.random.default_rng(0)
        pts = rng.uniform(0, 200, (68, 2))
        lm = parse_landmarks(pts_text(pts))
        assert np.allclose(lm.points, pts)

    def test_wrong_count_rejected(self):
        pts = np.zeros((67, 2))
        with pytest.raises(LandmarkError, match="67"):
            parse_landmarks(pts_text(pts).replace("n_points: 67", "n_points: 67"))

    def test_declared_vs_actual_mismatch(self):
        rng = np.random.default_rng(1)
        text = pts_text(rng.uniform(0, 10, (68, 2)))
        broken = text.replace("{\n", "{\n99 99\n")  # one extra pair
        with pytest.raises(LandmarkError):
            parse_landmarks(broken)

    def test_whitespace_variants_parse_identically(self):
        rng = np.random.default_rng(2)
        pts = rng.uniform(0, 50, (68, 2))
        base = pts_text(pts)
        squashed = base.replace("\n{\n", " { ").replace("\n}\n", " } ").replace("\n", "  ")
        a = parse_landmarks(base)
        b = parse_landmarks(squashed)
        assert np.array_equal(a.points, b.points)

    def test_malformed_coordinate(self):
        text = pts_text(np.zeros((68, 2))).replace("0.0 0.0", "zero 0.0", 1)
        with pytest.raises(LandmarkError, match="malformed|unexpected"):
            parse_landmarks(text)

    def test_format_parse_roundtrip_exact(self):
        rng = np.random.default_rng(3)
        lm = LandmarkSet(rng.uniform(-5, 260, (68, 2)))
        again = parse_landmarks(format_landmarks(lm).encode())
        assert np.array_equal(again.points, lm.points)


class TestNormalize:
    def test_idempotent(self):
        rng = np.random.default_rng(4)
        lm = normalize_shape(LandmarkSet(rng.uniform(0, 100, (68, 2))))
        again = normalize_shape(lm)
        assert np.abs(again.points - lm.points).max() < 1e-12

    def test_similarity_invariance(self):
        rng = np.random.default_rng(5)
        raw = rng.uniform(0, 100, (68, 2))
        a = normalize_shape(LandmarkSet(raw))
        b = normalize_shape(LandmarkSet(raw * 3.0 + np.array([17.0, -42.0])))
        assert np.abs(a.points - b.points).max() < 1e-12

    def test_unit_interocular_distance(self):
        rng = np.random.default_rng(6)
        lm = normalize_shape(LandmarkSet(rng.uniform(0, 100, (68, 2))))
        left = lm.points[36:42].mean(axis=0)
        right = lm.points[42:48].mean(axis=0)
        assert math.hypot(*(left - right)) == pytest.approx(1.0, abs=1e-12)

    def test_coincident_eyes_rejected(self):
        with pytest.raises(LandmarkError):
            normalize_shape(LandmarkSet(np.ones((68, 2))))


class TestDisplacement:
    def test_symmetric_face_exactly_zero_asymmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            lm = symmetric_face(rng)
            feats = displacement_features(normalize_shape(lm))
            assert feats.asymmetry == (0.0, 0.0)

    def test_droop_matches_vector_arithmetic_oracle(self):
        rng = np.random.default_rng(8)
        lm = symmetric_face(rng)
        pts = normalize_shape(lm).points.copy()
        pts[1:7, 1] += 0.1  # lower the left cheek by delta
        feats = displacement_features(LandmarkSet(pts))

        nose = pts[list(DEFAULT_REGIONS.nose)].mean(axis=0)
        left = pts[list(DEFAULT_REGIONS.left_cheek)].mean(axis=0) - nose
        right = pts[list(DEFAULT_REGIONS.right_cheek)].mean(axis=0) - nose
        expected = abs(math.hypot(*left) - math.hypot(*right))
        assert feats.asymmetry[0] == pytest.approx(expected, abs=1e-9)

    def test_label_swap_on_symmetric_face_is_identity(self):
        rng = np.random.default_rng(9)
        lm = symmetric_face(rng)
        mirrored = mirror_landmarks(lm)  # flip + index remap == label swap
        assert np.array_equal(mirrored.points, lm.points)
        a = displacement_features(normalize_shape(lm))
        b = displacement_features(normalize_shape(mirrored))
        assert a == b

    def test_mirror_swaps_alpha_beta_and_preserves_asymmetry(self):
        rng = np.random.default_rng(10)
        base = symmetric_face(rng).points.copy()
        base[2, 1] += 0.31
        base[3, 1] += 0.17  # asymmetric face now
        lm = LandmarkSet(base)
        f = displacement_features(normalize_shape(lm))
        fm = displacement_features(normalize_shape(mirror_landmarks(lm)))
        assert fm.alpha[0] == f.beta[0]
        assert fm.beta[0] == f.alpha[0]
        assert fm.asymmetry == f.asymmetry

    def test_similarity_invariance_of_features(self):
        rng = np.random.default_rng(11)
        raw = rng.uniform(0, 220, (68, 2))
        f1 = displacement_features(normalize_shape(LandmarkSet(raw)))
        f2 = displacement_features(
            normalize_shape(LandmarkSet(raw * 11.0 + np.array([3.0, 4.0])))
        )
        assert f1.alpha[0] == pytest.approx(f2.alpha[0], abs=1e-9)
        assert f1.beta[1] == pytest.approx(f2.beta[1], abs=1e-9)
        assert f1.asymmetry[0] == pytest.approx(f2.asymmetry[0], abs=1e-9)
        assert f1.asymmetry[1] == pytest.approx(f2.asymmetry[1], abs=1e-9)

    def test_angles_in_half_open_interval(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            lm = normalize_shape(LandmarkSet(rng.uniform(0, 100, (68, 2))))
            f = displacement_features(lm)
            for angle in (f.alpha[1], f.beta[1]):
                assert -math.pi < angle <= math.pi

    def test_empty_region_rejected(self):
        with pytest.raises(LandmarkError):
            FaceRegions(nose=())


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_property_symmetric_faces_never_show_asymmetry(seed):
    rng = np.random.default_rng(seed)
    lm = symmetric_face(rng)
    feats = displacement_features(normalize_shape(lm))
    assert feats.asymmetry == (0.0, 0.0)


@pytest.fixture(scope="module")
def paralysis_model():
    return train_face(gen_face(CorpusSpec("face", 40, 0.2, seed=77)))


class TestParalysisConfidence:
    def test_symmetric_face_low_confidence(self, paralysis_model):
        rng = np.random.default_rng(13)
        lm = symmetric_face(rng)
        assert paralysis_confidence(paralysis_model, lm) < 0.5

    def test_drooped_face_high_confidence(self, paralysis_model):
        items = gen_face(CorpusSpec("face", 15, 0.0, seed=78))
        drooped = [lm for lm, label in items if label == 1]
        hits = [paralysis_confidence(paralysis_model, lm) > 0.5 for lm in drooped]
        assert all(hits)

    def test_confidence_open_interval(self, paralysis_model):
        rng = np.random.default_rng(14)
        for _ in range(10):
            lm = LandmarkSet(rng.uniform(0, 200, (68, 2)))
            assert 0.0 < paralysis_confidence(paralysis_model, lm) < 1.0
