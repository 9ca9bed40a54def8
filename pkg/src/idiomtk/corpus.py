"""Data model, ingestion and validation for MWE-in-context instances."""

from __future__ import annotations

import enum
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path

from . import morph, tsvio
from .errors import DataError

LANGUAGES = ("EN", "PT", "GL")

INSTANCES_HEADER = ("id", "language", "mwe", "prev", "target", "next", "label")


class Label(enum.Enum):
    IDIOMATIC = "idiomatic"
    LITERAL = "literal"

    @classmethod
    def parse(cls, text: str) -> "Label":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise DataError(f"unknown label {text!r} (expected idiomatic or literal)") from None


class Setting(enum.Enum):
    ZERO_SHOT = "zero-shot"
    ONE_SHOT = "one-shot"


class Split(enum.Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


@dataclass(frozen=True)
class Instance:
    """One MWE occurrence with its three-sentence context."""

    id: str
    language: str
    mwe: str
    prev: str
    target: str
    next: str
    label: Label | None = None


@dataclass(frozen=True)
class Dataset:
    instances: tuple[Instance, ...]
    setting: Setting | None = None
    split: Split | None = None

    def __iter__(self) -> Iterator[Instance]:
        return iter(self.instances)

    def __len__(self) -> int:
        return len(self.instances)


def normalize_mwe(mwe: str) -> str:
    """Lower-case and collapse all whitespace runs to single spaces."""
    if not mwe:
        raise DataError("cannot normalize an empty MWE")
    return " ".join(mwe.split()).lower()


def find_token_subsequence(haystack: Sequence[str], needle: Sequence[str]) -> int:
    """Start index of the first case-insensitive occurrence of needle, or -1."""
    if not needle:
        return -1
    hay = [t.lower() for t in haystack]
    ned = [t.lower() for t in needle]
    for start in range(len(hay) - len(ned) + 1):
        if hay[start : start + len(ned)] == ned:
            return start
    return -1


def locate_mwe(instance: Instance) -> int:
    """Token index of the MWE's first occurrence in the tokenized target sentence."""
    return find_token_subsequence(morph.tokenize(instance.target), morph.tokenize(instance.mwe))


def _validate_instance(instance: Instance, *, context: str) -> None:
    if not instance.id:
        raise DataError(f"{context}: empty instance id")
    if instance.language not in LANGUAGES:
        raise DataError(
            f"{context}: unknown language code {instance.language!r} "
            f"(expected one of {', '.join(LANGUAGES)})"
        )
    if not instance.mwe.strip():
        raise DataError(f"{context}: empty MWE")
    if not instance.target.strip():
        raise DataError(f"{context}: empty target sentence")
    if locate_mwe(instance) < 0:
        raise DataError(
            f"{context}: MWE {instance.mwe!r} not found in target sentence {instance.target!r}"
        )


def load_instances(
    path: str | Path,
    require_labels: bool = False,
    *,
    setting: Setting | None = None,
    split: Split | None = None,
) -> Dataset:
    """Read an instances.tsv file, validating every row.

    Errors (wrong column count, unknown language, duplicate id, missing
    label under ``require_labels``, MWE not locatable in the target
    sentence) are reported with the offending line number.
    """
    instances: list[Instance] = []
    seen_ids: set[str] = set()
    for lineno, fields in tsvio.read_rows(path, 7, header=INSTANCES_HEADER):
        context = f"{path}:{lineno}"
        row_id, language, mwe, prev, target, nxt, label_text = fields
        if row_id in seen_ids:
            raise DataError(f"{context}: duplicate instance id {row_id!r}")
        seen_ids.add(row_id)
        if label_text:
            label = Label.parse(label_text)
        elif require_labels:
            raise DataError(f"{context}: missing label for instance {row_id!r}")
        else:
            label = None
        instance = Instance(
            id=row_id, language=language, mwe=mwe, prev=prev, target=target, next=nxt, label=label
        )
        _validate_instance(instance, context=context)
        instances.append(instance)
    return Dataset(instances=tuple(instances), setting=setting, split=split)


def save_instances(
    dataset: Dataset, path: str | Path, *, provenance: Sequence[str] | None = None
) -> None:
    rows = []
    for inst in dataset:
        _validate_instance(inst, context=f"instance {inst.id}")
        label_text = inst.label.value if inst.label is not None else ""
        rows.append((inst.id, inst.language, inst.mwe, inst.prev, inst.target, inst.next, label_text))
    tsvio.write_rows(path, rows, header=INSTANCES_HEADER, provenance=provenance)


def check_zero_shot_disjointness(train: Dataset, eval_set: Dataset) -> list[str]:
    """Normalized MWEs shared between train and eval; empty means disjoint."""
    train_mwes = {normalize_mwe(inst.mwe) for inst in train}
    eval_mwes = {normalize_mwe(inst.mwe) for inst in eval_set}
    return sorted(train_mwes & eval_mwes)
