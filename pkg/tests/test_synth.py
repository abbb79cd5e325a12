import hashlib
from pathlib import Path

import numpy as np
import pytest

from strokescreen.errors import DataError
from strokescreen.face import paralysis_feature_vector
from strokescreen.fusion import MODALITIES
from strokescreen.synth import (
    CLASS_NAMES,
    CorpusSpec,
    bright_blob_pixels,
    envelope_sharpness,
    gen_face,
    gen_fusion,
    gen_retina,
    gen_vitals,
    gen_vocal,
    load_corpus,
    read_manifest,
    write_corpus,
)
from strokescreen.synth.fusion_rows import separating_hyperplane
from strokescreen.synth.vitalgen import NORMAL_MEANS, risk_means


def tree_digest(root: Path) -> str:
    h = hashlib.sha256()
    for p in sorted(Path(root).rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(root)).encode())
            h.update(p.read_bytes())
    return h.hexdigest()


class TestVocal:
    def test_seeded_determinism_bytes(self):
        a = gen_vocal(CorpusSpec("vocal", 3, 0.4, seed=9))
        b = gen_vocal(CorpusSpec("vocal", 3, 0.4, seed=9))
        for (ca, la), (cb, lb) in zip(a, b):
            assert la == lb and np.array_equal(ca.samples, cb.samples)

    def test_difficulty_zero_oracle_separates(self):
        items = gen_vocal(CorpusSpec("vocal", 20, 0.0, seed=5))
        stats = [(envelope_sharpness(c), l) for c, l in items]
        clear = [s for s, l in stats if l == 0]
        slurred = [s for s, l in stats if l == 1]
        assert min(clear) > max(slurred)

    def test_class_counts(self):
        items = gen_vocal(CorpusSpec("vocal", 7, 0.3, seed=1))
        assert len(items) == 14
        assert sum(l for _, l in items) == 7


class TestRetina:
    def test_seeded_determinism(self):
        a = gen_retina(CorpusSpec("retina", 2, 0.2, seed=3))
        b = gen_retina(CorpusSpec("retina", 2, 0.2, seed=3))
        for (ia, la), (ib, lb) in zip(a, b):
            assert la == lb and np.array_equal(ia.pixels, ib.pixels)

    def test_blob_oracle_separates_at_zero_difficulty(self):
        items = gen_retina(CorpusSpec("retina", 15, 0.0, seed=6))
        counts = [(bright_blob_pixels(img), l) for img, l in items]
        normal = [c for c, l in counts if l == 0]
        sick = [c for c, l in counts if l == 1]
        assert max(normal) < min(sick)

    def test_all_images_128(self):
        for img, _ in gen_retina(CorpusSpec("retina", 3, 0.5, seed=7)):
            assert (img.width, img.height) == (128, 128)


class TestFace:
    def test_symmetric_class_asymmetry_near_jitter_scale(self):
        items = gen_face(CorpusSpec("face", 30, 0.3, seed=8))
        normals = [paralysis_feature_vector(lm)[4] for lm, l in items if l == 0]
        droops = [paralysis_feature_vector(lm)[4] for lm, l in items if l == 1]
        # jitter is 1.2 px on a 60 px interocular: asymmetry ~ 0.02 units
        assert 0.0 < np.median(normals) < 0.08
        assert np.median(droops) > np.median(normals)

    def test_exactly_68_points(self):
        for lm, _ in gen_face(CorpusSpec("face", 4, 0.1, seed=9)):
            assert lm.points.shape == (68, 2)

    def test_seeded_determinism(self):
        a = gen_face(CorpusSpec("face", 3, 0.2, seed=10))
        b = gen_face(CorpusSpec("face", 3, 0.2, seed=10))
        for (la, ya), (lb, yb) in zip(a, b):
            assert ya == yb and np.array_equal(la.points, lb.points)

    def test_zero_droop_degenerates_to_normal_class(self):
        items = gen_face(CorpusSpec("face", 40, 0.3, seed=19), droop_scale=0.0)
        asym = {0: [], 1: []}
        for lm, label in items:
            asym[label].append(paralysis_feature_vector(lm)[4])
        # same jitter process, no displacement: the classes are statistically
        # indistinguishable on the asymmetry statistic
        assert np.median(asym[1]) < 2.5 * np.median(asym[0])
        assert np.median(asym[1]) < 0.08


class TestVitals:
    def test_all_samples_pass_invariants(self):
        for stream, _ in gen_vitals(CorpusSpec("vascular", 10, 0.6, seed=11)):
            last_ts = None
            for s in stream:
                s.validate()
                if last_ts is not None:
                    assert s.timestamp_ms > last_ts
                last_ts = s.timestamp_ms

    def test_class_means_separated(self):
        items = gen_vitals(CorpusSpec("vascular", 25, 0.3, seed=12))
        last_sys = {0: [], 1: []}
        for stream, label in items:
            last_sys[label].append(stream[-1].systolic)
        assert np.mean(last_sys[1]) - np.mean(last_sys[0]) > 20.0
        expected_gap = risk_means(0.3)[0] - NORMAL_MEANS[0]
        assert np.mean(last_sys[1]) - np.mean(last_sys[0]) == pytest.approx(
            expected_gap, abs=6.0
        )

    def test_seeded_determinism(self):
        a = gen_vitals(CorpusSpec("vascular", 3, 0.3, seed=13))
        b = gen_vitals(CorpusSpec("vascular", 3, 0.3, seed=13))
        assert a == b


class TestFusionRows:
    def test_difficulty_zero_linearly_separable(self):
        rows = gen_fusion(CorpusSpec("fusion", 40, 0.0, seed=14))
        assert separating_hyperplane(rows) is not None

    def test_values_in_unit_interval(self):
        for inp, _ in gen_fusion(CorpusSpec("fusion", 10, 1.0, seed=15)):
            for m in MODALITIES:
                assert 0.0 <= getattr(inp, m) <= 1.0

    def test_counts(self):
        rows = gen_fusion(CorpusSpec("fusion", 9, 0.2, seed=16))
        assert len(rows) == 18


class TestCorpusIO:
    def test_identical_spec_identical_bytes(self, tmp_path):
        spec = CorpusSpec("face", 4, 0.25, seed=17)
        write_corpus(spec, tmp_path / "a")
        write_corpus(spec, tmp_path / "b")
        assert tree_digest(tmp_path / "a") == tree_digest(tmp_path / "b")

    @pytest.mark.parametrize("modality", list(CLASS_NAMES))
    def test_write_load_roundtrip(self, modality, tmp_path):
        spec = CorpusSpec(modality, 2, 0.3, seed=18)
        out = write_corpus(spec, tmp_path / modality)
        manifest = read_manifest(out)
        assert manifest["modality"] == modality
        assert len(manifest["items"]) == 4
        found, items = load_corpus(out)
        assert found == modality
        assert [l for _, l in items] == [e["label"] for e in manifest["items"]]
        names = CLASS_NAMES[modality]
        for entry in manifest["items"]:
            assert entry["file"].startswith(names[entry["label"]] + "/")

    def test_manifest_missing(self, tmp_path):
        with pytest.raises(DataError):
            read_manifest(tmp_path)

    def test_spec_validation(self):
        with pytest.raises(DataError):
            CorpusSpec("sonar", 1, 0.1, 0)
        with pytest.raises(DataError):
            CorpusSpec("vocal", 0, 0.1, 0)
        with pytest.raises(DataError):
            CorpusSpec("vocal", 1, 1.5, 0)
