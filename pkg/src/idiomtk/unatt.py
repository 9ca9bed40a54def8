"""Type-based heuristic from training attestations.

Counts how often each MWE type appears with each label in labeled training
data.  At prediction time an MWE attested under exactly one class is assigned
that class; anything else (both classes attested, or never seen) is left
unanswered.  Precision is measured over answered instances only, recall over
all of them.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .corpus import Instance, Label, normalize_mwe
from .errors import DataError
from .predictions import Method, Prediction
from .tsvio import read_rows, write_rows


@dataclass
class UnattTable:
    """Per-type label counts keyed by normalized MWE."""

    counts: dict[str, tuple[int, int]] = field(default_factory=dict)

    def add(self, mwe: str, label: Label) -> None:
        key = normalize_mwe(mwe)
        idiomatic, literal = self.counts.get(key, (0, 0))
        if label is Label.IDIOMATIC:
            idiomatic += 1
        else:
            literal += 1
        self.counts[key] = (idiomatic, literal)

    def lookup(self, mwe: str) -> tuple[int, int]:
        return self.counts.get(normalize_mwe(mwe), (0, 0))

    def __len__(self) -> int:
        return len(self.counts)


def build_table(instances: Iterable[Instance]) -> UnattTable:
    table = UnattTable()
    for instance in instances:
        if instance.label is None:
            raise DataError(f"instance {instance.id!r} has no label; cannot count attestations")
        table.add(instance.mwe, instance.label)
    return table


def classify_unatt(instance: Instance, table: UnattTable) -> Prediction | None:
    """Predict the sole attested class for the MWE, or abstain with None."""
    idiomatic, literal = table.lookup(instance.mwe)
    if idiomatic > 0 and literal == 0:
        label = Label.IDIOMATIC
    elif literal > 0 and idiomatic == 0:
        label = Label.LITERAL
    else:
        return None
    return Prediction(
        instance_id=instance.id,
        label=label,
        method=Method.UNATT,
        rationale=f"attested {idiomatic} idiomatic, {literal} literal",
    )


def unatt_precision_recall(
    instances: Sequence[Instance], table: UnattTable
) -> tuple[float, float, int, int]:
    """Score the heuristic on labeled instances.

    Returns (precision, recall, n_answered, n_correct).  Precision divides by
    answered instances, recall by all instances; abstentions only hurt recall.
    """
    answered = 0
    correct = 0
    for instance in instances:
        if instance.label is None:
            raise DataError(f"instance {instance.id!r} has no label; cannot score")
        prediction = classify_unatt(instance, table)
        if prediction is None:
            continue
        answered += 1
        if prediction.label is instance.label:
            correct += 1
    precision = correct / answered if answered else 0.0
    recall = correct / len(instances) if instances else 0.0
    return precision, recall, answered, correct


def save_table(path: str, table: UnattTable, *, provenance: Sequence[str] | None = None) -> None:
    rows = [
        (mwe, str(idiomatic), str(literal))
        for mwe, (idiomatic, literal) in sorted(table.counts.items())
    ]
    write_rows(path, rows, header=("mwe", "idiomatic_count", "literal_count"), provenance=provenance)


def load_table(path: str) -> UnattTable:
    table = UnattTable()
    for lineno, (mwe, idiomatic, literal) in read_rows(
        path, 3, header=("mwe", "idiomatic_count", "literal_count")
    ):
        try:
            counts = (int(idiomatic), int(literal))
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: non-integer count") from exc
        if min(counts) < 0:
            raise DataError(f"{path}:{lineno}: negative count")
        if mwe != normalize_mwe(mwe):
            raise DataError(f"{path}:{lineno}: MWE key {mwe!r} is not normalized")
        if mwe in table.counts:
            raise DataError(f"{path}:{lineno}: duplicate MWE {mwe!r}")
        table.counts[mwe] = counts
    return table
