import numpy as np
import pytest
from hypothesis import given, strategies as st

from strokescreen.errors import DataError
from strokescreen.metrics import (
    ConfusionMatrix,
    compute_metrics,
    evaluate_classifier,
    format_report_table,
    report_rows,
)

# fixed cross-check triples: 3-decimal (precision, sensitivity) pairs and
# the F score each is expected to print at the same precision
MODALITY_CELLS = [
    ("retinopathy", 0.917, 0.917, 0.917),
    ("slurred_speech", 0.923, 0.960, 0.941),
    ("vascular", 0.951, 0.869, 0.908),
    ("facial_paralysis", 0.882, 0.957, 0.918),
]


def harmonic(p, s):
    return 2.0 * p * s / (p + s)


class TestComputeMetrics:
    def test_perfect_classifier(self):
        rep = compute_metrics(ConfusionMatrix(tp=10, fp=0, fn=0, tn=10))
        assert (rep.precision, rep.sensitivity, rep.f_beta, rep.accuracy) == (1, 1, 1, 1)

    def test_count_by_hand_case(self):
        rep = compute_metrics(ConfusionMatrix(tp=3, fp=1, fn=2, tn=4))
        assert rep.precision == pytest.approx(0.75)
        assert rep.sensitivity == pytest.approx(0.6)
        assert rep.accuracy == pytest.approx(0.7)
        assert rep.f_beta == pytest.approx(harmonic(0.75, 0.6))

    @pytest.mark.parametrize("name,p,s,f", MODALITY_CELLS)
    def test_reference_cells_match_harmonic_mean(self, name, p, s, f):
        assert abs(harmonic(p, s) - f) <= 0.0005

    def test_holistic_cell_within_input_quantization(self):
        # the pair (0.941, 0.959) is paired with a printed F score of 0.949;
        # the harmonic mean of those values is 0.94991, so the cell is only
        # consistent once the 3-decimal rounding of P and S is accounted for
        p, s, f = 0.941, 0.959, 0.949
        hm = harmonic(p, s)
        assert hm == pytest.approx(0.94991, abs=5e-5)
        lo = harmonic(p - 0.0005, s - 0.0005) - 0.0005
        hi = harmonic(p + 0.0005, s + 0.0005) + 0.0005
        assert lo <= f <= hi

    def test_undefined_distinct_from_zero(self):
        rep = compute_metrics(ConfusionMatrix(tp=0, fp=0, fn=3, tn=5))
        assert rep.precision is None
        assert rep.sensitivity == 0.0
        assert rep.f_beta is None
        assert rep.accuracy == pytest.approx(5 / 8)

    def test_f_beta_undefined_when_both_zero(self):
        rep = compute_metrics(ConfusionMatrix(tp=0, fp=2, fn=3, tn=5))
        assert rep.precision == 0.0 and rep.sensitivity == 0.0
        assert rep.f_beta is None

    def test_all_zero_matrix_rejected(self):
        with pytest.raises(DataError):
            compute_metrics(ConfusionMatrix(tp=0, fp=0, fn=0, tn=0))

    def test_negative_counts_rejected(self):
        with pytest.raises(DataError):
            ConfusionMatrix(tp=-1, fp=0, fn=0, tn=1)


@given(
    st.integers(min_value=0, max_value=500),
    st.integers(min_value=0, max_value=500),
    st.integers(min_value=0, max_value=500),
    st.integers(min_value=0, max_value=500),
)
def test_property_f_beta_between_precision_and_sensitivity(tp, fp, fn, tn):
    if tp + fp + fn + tn == 0:
        return
    rep = compute_metrics(ConfusionMatrix(tp, fp, fn, tn))
    if rep.f_beta is None or rep.precision is None or rep.sensitivity is None:
        return
    lo, hi = sorted((rep.precision, rep.sensitivity))
    assert lo - 1e-12 <= rep.f_beta <= hi + 1e-12
    if rep.precision == rep.sensitivity:
        assert rep.f_beta == pytest.approx(rep.precision)


@given(
    st.integers(min_value=0, max_value=500),
    st.integers(min_value=0, max_value=500),
    st.integers(min_value=0, max_value=500),
    st.integers(min_value=1, max_value=500),
)
def test_property_accuracy_label_swap_symmetry(tp, fp, fn, tn):
    a = compute_metrics(ConfusionMatrix(tp, fp, fn, tn)).accuracy
    b = compute_metrics(ConfusionMatrix(tn, fn, fp, tp)).accuracy
    assert a == pytest.approx(b)


class TestEvaluateClassifier:
    def test_all_correct(self):
        cm = evaluate_classifier([1, 0, 1, 0], [1, 0, 1, 0])
        assert (cm.fp, cm.fn) == (0, 0)
        assert (cm.tp, cm.tn) == (2, 2)

    def test_all_inverted(self):
        cm = evaluate_classifier([0, 1, 0, 1], [1, 0, 1, 0])
        assert (cm.tp, cm.tn) == (0, 0)
        assert (cm.fp, cm.fn) == (2, 2)

    def test_random_case_matches_manual_tally(self):
        rng = np.random.default_rng(0)
        preds = rng.integers(0, 2, 20).tolist()
        labels = rng.integers(0, 2, 20).tolist()
        cm = evaluate_classifier(preds, labels)
        tally = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
        for p, y in zip(preds, labels):
            key = ("t" if p == y else "f") + ("p" if p else "n")
            tally[key] += 1
        assert (cm.tp, cm.fp, cm.fn, cm.tn) == (
            tally["tp"], tally["fp"], tally["fn"], tally["tn"],
        )
        assert cm.total == 20

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            evaluate_classifier([1], [1, 0])


class TestReportFormat:
    def test_table_layout(self):
        rows = [
            (name, compute_metrics(ConfusionMatrix(tp=90, fp=9, fn=8, tn=93)))
            for name, *_ in MODALITY_CELLS
        ]
        table = format_report_table(rows)
        lines = table.splitlines()
        assert lines[0].startswith("Measurement")
        assert all(name in lines[0] for name, *_ in MODALITY_CELLS)
        assert lines[2].startswith("Precision")
        assert lines[5].startswith("Accuracy")
        assert "%" in lines[5]

    def test_machine_readable_rows(self):
        rep = compute_metrics(ConfusionMatrix(tp=1, fp=0, fn=0, tn=1))
        rows = report_rows([("demo", rep)])
        assert rows == [
            {"modality": "demo", "precision": 1.0, "sensitivity": 1.0, "f_beta": 1.0, "accuracy": 1.0}
        ]
