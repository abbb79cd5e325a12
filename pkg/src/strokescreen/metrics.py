"""Confusion-matrix metrics and evaluation report tables.

Standard definitions: precision = TP/(TP+FP), sensitivity = TP/(TP+FN),
accuracy = (TP+TN)/total, and the F score as the harmonic mean of precision
and sensitivity. A metric whose denominator is zero is reported as None
(undefined), which is distinct from 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from strokescreen.errors import DataError

__all__ = [
    "ConfusionMatrix",
    "MetricsReport",
    "compute_metrics",
    "evaluate_classifier",
    "format_report_table",
    "report_rows",
]


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise DataError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsReport:
    precision: float | None
    sensitivity: float | None
    f_beta: float | None
    accuracy: float | None


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total == 0:
        raise DataError("all-zero confusion matrix")
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    sensitivity = _ratio(cm.tp, cm.tp + cm.fn)
    if precision is None or sensitivity is None or precision + sensitivity == 0:
        f_beta = None
    else:
        f_beta = 2.0 * precision * sensitivity / (precision + sensitivity)
    return MetricsReport(
        precision=precision,
        sensitivity=sensitivity,
        f_beta=f_beta,
        accuracy=(cm.tp + cm.tn) / cm.total,
    )


def evaluate_classifier(predictions, labels) -> ConfusionMatrix:
    """Tally binary predictions against binary labels (truthy = positive)."""
    predictions = list(predictions)
    labels = list(labels)
    if len(predictions) != len(labels):
        raise DataError(
            f"{len(predictions)} predictions vs {len(labels)} labels"
        )
    tp = fp = fn = tn = 0
    for p, y in zip(predictions, labels):
        p, y = bool(p), bool(y)
        if p and y:
            tp += 1
        elif p and not y:
            fp += 1
        elif not p and y:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def _fmt(v: float | None, percent: bool = False) -> str:
    if v is None:
        return "undefined"
    return f"{100.0 * v:.2f}%" if percent else f"{v:.3f}"


def format_report_table(rows: list[tuple[str, MetricsReport]]) -> str:
    """Modalities as columns, the four measurements as rows, accuracy in percent."""
    names = [name for name, _ in rows]
    widths = [max(len(n), 11) for n in names]
    head = "Measurement  " + "  ".join(n.ljust(w) for n, w in zip(names, widths))
    lines = [head, "-" * len(head)]
    for label, attr, pct in (
        ("Precision", "precision", False),
        ("Sensitivity", "sensitivity", False),
        ("F-Beta", "f_beta", False),
        ("Accuracy", "accuracy", True),
    ):
        cells = [
            _fmt(getattr(rep, attr), percent=pct).ljust(w)
            for (_, rep), w in zip(rows, widths)
        ]
        lines.append(label.ljust(11) + "  " + "  ".join(cells))
    return "\n".join(lines)


def report_rows(rows: list[tuple[str, MetricsReport]]) -> list[dict]:
    """Machine-readable form of the same table."""
    return [
        {
            "modality": name,
            "precision": rep.precision,
            "sensitivity": rep.sensitivity,
            "f_beta": rep.f_beta,
            "accuracy": rep.accuracy,
        }
        for name, rep in rows
    ]
