import numpy as np
import pytest

from strokescreen.errors import DataError
from strokescreen.fusion import MODALITIES, Diagnosis, FusionInput, fuse, fusion_train
from strokescreen.svm import SvmTrainConfig, svm_train, decision_many
from strokescreen.synth import CorpusSpec, gen_fusion
from strokescreen.pipelines import eval_fusion, train_fusion_rows
from strokescreen.metrics import compute_metrics


@pytest.fixture(scope="module")
def model():
    # paper-sized split: 300 training rows
    return train_fusion_rows(gen_fusion(CorpusSpec("fusion", 150, 0.3, seed=500)))


class TestFusionInput:
    def test_requires_vascular(self):
        with pytest.raises(DataError):
            FusionInput(vocal=0.5, vascular=None, retina=0.5, face=0.5)

    def test_range_validation(self):
        with pytest.raises(DataError):
            FusionInput(vocal=1.5, vascular=0.5)

    def test_presence_tracking(self):
        inp = FusionInput(vocal=0.5, vascular=0.5)
        assert inp.present == ("vocal", "vascular")
        assert inp.missing == ("retina", "face")


class TestFuse:
    def test_all_low_confidences_not_at_risk(self, model):
        d = fuse(model, FusionInput(0.02, 0.03, 0.02, 0.04))
        assert not d.at_risk
        assert d.risk_percent < 50.0

    def test_all_high_confidences_at_risk(self, model):
        d = fuse(model, FusionInput(0.98, 0.97, 0.99, 0.96))
        assert d.at_risk
        assert d.risk_percent > 50.0

    def test_monotone_in_each_coordinate(self, model):
        base = [0.4, 0.4, 0.4, 0.4]
        p0 = fuse(model, FusionInput(*base)).risk_percent
        for i in range(4):
            bumped = list(base)
            bumped[i] = 0.9
            assert fuse(model, FusionInput(*bumped)).risk_percent >= p0

    def test_at_risk_consistent_with_threshold(self, model):
        rng = np.random.default_rng(0)
        for _ in range(200):
            d = fuse(model, FusionInput(*rng.uniform(0, 1, 4)))
            assert d.at_risk == (d.risk_percent >= 50.0)
            assert 0.0 <= d.risk_percent <= 100.0

    def test_missing_modality_contributes_exactly_zero(self, model):
        d = fuse(model, FusionInput(vocal=None, vascular=0.8, retina=None, face=0.7))
        assert d.imputed == ("vocal", "retina")
        assert d.contributions[0] == 0.0
        assert d.contributions[2] == 0.0

    def test_contributions_length_and_version(self, model):
        d = fuse(model, FusionInput(0.5, 0.5, 0.5, 0.5))
        assert len(d.contributions) == 4
        assert len(d.model_version) == 12


class TestFusionTrain:
    def test_paper_split_validation_accuracy(self, model):
        val = gen_fusion(CorpusSpec("fusion", 100, 0.3, seed=501))
        rep = compute_metrics(eval_fusion(model, val))
        assert rep.accuracy >= 0.95

    def test_nonnegative_weights_enforced(self, model):
        assert np.all(model.weights >= 0.0)
        assert model.platt_a <= 0.0
        with pytest.raises(DataError):
            fusion_train(
                [(FusionInput(0.1, 0.1, 0.1, 0.1), -1), (FusionInput(0.9, 0.9, 0.9, 0.9), 1)],
                SvmTrainConfig(nonnegative_weights=False),
            )

    def test_rows_must_be_complete(self):
        rows = [
            (FusionInput(vocal=None, vascular=0.1, retina=0.1, face=0.1), -1),
            (FusionInput(0.9, 0.9, 0.9, 0.9), 1),
        ]
        with pytest.raises(DataError, match="missing"):
            fusion_train(rows)

    def test_label_flip_flips_margins_unconstrained(self):
        # sign symmetry holds for the underlying trainer without the
        # nonnegative projection (the projection breaks it by design)
        rows = gen_fusion(CorpusSpec("fusion", 40, 0.2, seed=502))
        pts = [
            (np.array([getattr(inp, m) for m in MODALITIES]), 1 if l else -1)
            for inp, l in rows
        ]
        flipped = [(x, -y) for x, y in pts]
        cfg = SvmTrainConfig(iterations=4000, seed=3)
        m1 = svm_train(pts, cfg)
        m2 = svm_train(flipped, cfg)
        xs = np.array([x for x, _ in pts])
        s1 = np.sign(decision_many(m1, xs))
        s2 = np.sign(decision_many(m2, xs))
        assert np.array_equal(s1, -s2)

    def test_constant_coordinate_no_discrimination(self):
        rng = np.random.default_rng(1)
        rows = []
        for label in (-1, 1):
            for _ in range(20):
                v = 0.2 + 0.6 * (label > 0) + rng.uniform(0, 0.15)
                rows.append((FusionInput(min(v, 1.0), 0.5, min(v, 1.0), min(v, 1.0)), label))
        model = fusion_train(rows)
        d_lo = fuse(model, FusionInput(0.3, 0.0, 0.3, 0.3))
        d_hi = fuse(model, FusionInput(0.3, 1.0, 0.3, 0.3))
        assert d_hi.contributions[1] == pytest.approx(d_lo.contributions[1], abs=1e-6)


class TestDiagnosisInvariants:
    def test_consistency_enforced(self):
        with pytest.raises(DataError):
            Diagnosis(at_risk=False, risk_percent=80.0, contributions=(0, 0, 0, 0), model_version="x")
        with pytest.raises(DataError):
            Diagnosis(at_risk=True, risk_percent=120.0, contributions=(0, 0, 0, 0), model_version="x")
