"""Macro-F1 scoring and table rendering.

Scores are macro F1 over the two classes, reported per language plus a
pooled ALL column computed on the concatenation of all instances (not an
average of the per-language scores).  A class missing from both gold and
predictions is excluded from the macro average; a class with a zero
precision+recall denominator scores 0.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .corpus import LANGUAGES, Instance, Label
from .errors import DataError
from .predictions import Prediction
from .tsvio import write_rows

REPORT_HEADER = ("setting", "method", "language", "macro_f1", "n")
ALL_COLUMN = "ALL"


def _class_f1(golds: Sequence[Label], preds: Sequence[Label], cls: Label) -> float:
    true_positive = sum(1 for g, p in zip(golds, preds) if g is cls and p is cls)
    predicted = sum(1 for p in preds if p is cls)
    actual = sum(1 for g in golds if g is cls)
    if predicted == 0 and actual == 0:
        raise ValueError("class absent from both gold and predictions")
    precision = true_positive / predicted if predicted else 0.0
    recall = true_positive / actual if actual else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def macro_f1(golds: Sequence[Label], preds: Sequence[Label]) -> float:
    """Unweighted mean of per-class F1 over the classes that occur at all."""
    if len(golds) != len(preds):
        raise DataError(f"gold/prediction length mismatch: {len(golds)} vs {len(preds)}")
    if not golds:
        raise DataError("cannot score an empty set")
    scores = []
    for cls in (Label.IDIOMATIC, Label.LITERAL):
        try:
            scores.append(_class_f1(golds, preds, cls))
        except ValueError:
            continue
    return sum(scores) / len(scores)


@dataclass(frozen=True)
class ScoreReport:
    """Macro F1 per language and pooled, for one method under one setting."""

    setting: str
    method: str
    scores: Mapping[str, float]
    counts: Mapping[str, int]
    parameters: Mapping[str, str] = field(default_factory=dict)

    def languages(self) -> list[str]:
        present = [lang for lang in LANGUAGES if lang in self.scores]
        return present + [ALL_COLUMN]


def score(
    instances: Sequence[Instance],
    predictions: Sequence[Prediction],
    *,
    setting: str,
    method: str,
    parameters: Mapping[str, str] | None = None,
) -> ScoreReport:
    """Score predictions against labeled instances, per language and pooled."""
    if not instances:
        raise DataError("cannot score an empty set")
    by_id = {p.instance_id: p for p in predictions}
    if len(by_id) != len(predictions):
        raise DataError("duplicate instance ids in predictions")
    pairs: dict[str, list[tuple[Label, Label]]] = {}
    pooled: list[tuple[Label, Label]] = []
    for instance in instances:
        if instance.label is None:
            raise DataError(f"instance {instance.id!r} has no gold label")
        prediction = by_id.pop(instance.id, None)
        if prediction is None:
            raise DataError(f"no prediction for instance {instance.id!r}")
        pair = (instance.label, prediction.label)
        pairs.setdefault(instance.language, []).append(pair)
        pooled.append(pair)
    if by_id:
        stray = sorted(by_id)[0]
        raise DataError(f"prediction for unknown instance {stray!r}")

    scores: dict[str, float] = {}
    counts: dict[str, int] = {}
    for language, lang_pairs in pairs.items():
        scores[language] = macro_f1([g for g, _ in lang_pairs], [p for _, p in lang_pairs])
        counts[language] = len(lang_pairs)
    scores[ALL_COLUMN] = macro_f1([g for g, _ in pooled], [p for _, p in pooled])
    counts[ALL_COLUMN] = len(pooled)
    return ScoreReport(
        setting=setting,
        method=method,
        scores=scores,
        counts=counts,
        parameters=dict(parameters or {}),
    )


def render_reports(reports: Sequence[ScoreReport]) -> str:
    """Fixed-width text table, one row per (setting, method), percent columns."""
    if not reports:
        raise DataError("nothing to render")
    columns = [lang for lang in LANGUAGES if any(lang in r.scores for r in reports)]
    columns.append(ALL_COLUMN)
    header = ["Setting", "Method"] + columns
    body = []
    for report in reports:
        row = [report.setting, report.method]
        for column in columns:
            value = report.scores.get(column)
            row.append("-" if value is None else f"{100.0 * value:.1f}")
        body.append(row)
    widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]
    lines = []
    for line in [header] + body:
        lines.append(
            "  ".join(
                cell.ljust(width) if i < 2 else cell.rjust(width)
                for i, (cell, width) in enumerate(zip(line, widths))
            ).rstrip()
        )
    return "\n".join(lines) + "\n"


def write_report_tsv(
    path: str,
    reports: Iterable[ScoreReport],
    *,
    provenance: Sequence[str] | None = None,
) -> None:
    rows = []
    for report in reports:
        for language in report.languages():
            rows.append(
                (
                    report.setting,
                    report.method,
                    language,
                    repr(report.scores[language]),
                    str(report.counts[language]),
                )
            )
    write_rows(path, rows, header=REPORT_HEADER, provenance=provenance)
