"""Prediction records and the predictions.tsv interchange format."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from . import tsvio
from .corpus import Label
from .errors import DataError


class Method(enum.Enum):
    MT_ONE = "mt-one"
    MT_ALL = "mt-all"
    UNATT = "unatt"
    COMBINED = "combined"
    GLOSS_NEURAL = "gloss-neural"
    BASELINE = "baseline"

    @classmethod
    def parse(cls, text: str) -> "Method":
        try:
            return cls(text)
        except ValueError:
            raise DataError(f"unknown method {text!r}") from None


@dataclass(frozen=True)
class Prediction:
    instance_id: str
    label: Label
    method: Method
    rationale: str | None = None


def write_predictions(
    path: str | Path,
    predictions: Iterable[Prediction],
    *,
    provenance: Sequence[str] | None = None,
) -> None:
    rows = [
        (p.instance_id, p.label.value, p.method.value, p.rationale or "")
        for p in predictions
    ]
    tsvio.write_rows(path, rows, provenance=provenance)


def read_predictions(path: str | Path) -> list[Prediction]:
    predictions = []
    for _, (instance_id, label, method, rationale) in tsvio.read_rows(path, 4):
        predictions.append(
            Prediction(
                instance_id=instance_id,
                label=Label.parse(label),
                method=Method.parse(method),
                rationale=rationale or None,
            )
        )
    return predictions
