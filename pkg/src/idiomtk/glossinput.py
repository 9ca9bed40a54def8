"""Classifier input sequences: plain context⊕MWE and gloss-augmented variants.

The baseline sequence appends the MWE to its context sentence after a
``[SEP]`` marker.  Gloss variants additionally append, for every word of the
MWE, the glosses of all its senses, each as its own ``[SEP]``-delimited
segment.  Gloss language is a policy: GlossEn always asks for English,
GlossSrc asks for the instance's language and falls back to English gloss by
gloss.  Galician has no gloss coverage of its own and is looked up as
Portuguese.  A whitespace-token budget trims whole glosses from the tail;
the baseline part is never trimmed.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence

from . import morph
from .corpus import Instance, Label
from .errors import DataError
from .lexkb import MultiWordnetIndex, kb_query_languages
from .tsvio import read_rows, write_rows

SEP = "[SEP]"
DEFAULT_TOKEN_BUDGET = 256


class Variant(enum.Enum):
    BASELINE = "baseline"
    GLOSS_EN = "gloss-en"
    GLOSS_SRC = "gloss-src"

    @classmethod
    def parse(cls, text: str) -> "Variant":
        for variant in cls:
            if variant.value == text:
                return variant
        raise DataError(f"unknown sequence variant {text!r}")


class SequenceRecord:
    """One classifier input line, ready for sequences.tsv."""

    __slots__ = ("instance_id", "text", "label", "variant")

    def __init__(
        self,
        instance_id: str,
        text: str,
        label: Label | None,
        variant: Variant,
    ) -> None:
        if not instance_id:
            raise DataError("sequence record needs an instance id")
        if f" {SEP} " not in text:
            raise DataError(f"sequence text for {instance_id!r} lacks a {SEP} marker")
        self.instance_id = instance_id
        self.text = text
        self.label = label
        self.variant = variant

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SequenceRecord):
            return NotImplemented
        return (
            self.instance_id == other.instance_id
            and self.text == other.text
            and self.label == other.label
            and self.variant == other.variant
        )

    def __repr__(self) -> str:
        return (
            f"SequenceRecord(instance_id={self.instance_id!r}, text={self.text!r}, "
            f"label={self.label!r}, variant={self.variant!r})"
        )


def build_baseline_sequence(instance: Instance) -> SequenceRecord:
    """Concatenate the MWE after the context sentence; neighbours excluded."""
    return SequenceRecord(
        instance_id=instance.id,
        text=f"{instance.target} {SEP} {instance.mwe}",
        label=instance.label,
        variant=Variant.BASELINE,
    )


def _gloss_language_preferences(language: str, policy: Variant) -> tuple[str, ...]:
    if policy is Variant.GLOSS_EN:
        return ("EN",)
    source_gloss_lang = "PT" if language == "GL" else language
    if source_gloss_lang == "EN":
        return ("EN",)
    return (source_gloss_lang, "EN")


def _word_glosses(
    lemma: str,
    language: str,
    index: MultiWordnetIndex,
    preferences: Sequence[str],
) -> list[str]:
    texts: list[str] = []
    seen_synsets: set[int] = set()
    seen_texts: set[str] = set()
    for query_lang in kb_query_languages(language):
        for synset in index.synsets_for(lemma, query_lang):
            if id(synset) in seen_synsets:
                continue
            seen_synsets.add(id(synset))
            for gloss_lang in preferences:
                gloss = synset.glosses.get(gloss_lang)
                if gloss is not None:
                    break
            else:
                gloss = None
            if gloss is not None and gloss not in seen_texts:
                seen_texts.add(gloss)
                texts.append(gloss)
    return texts


def build_gloss_sequence(
    instance: Instance,
    index: MultiWordnetIndex,
    lexicon: morph.MorphLexicon,
    policy: Variant,
    token_budget: int = DEFAULT_TOKEN_BUDGET,
) -> SequenceRecord:
    """Append per-word sense glosses to the baseline sequence under a budget.

    Glosses follow MWE word order, then sense order; each occupies its own
    segment.  When the whitespace-token count exceeds the budget, whole
    glosses are dropped from the tail; the baseline part always survives.
    """
    if policy not in (Variant.GLOSS_EN, Variant.GLOSS_SRC):
        raise DataError(f"not a gloss policy: {policy.value!r}")
    if token_budget < 1:
        raise DataError("token budget must be positive")
    baseline = build_baseline_sequence(instance)
    preferences = _gloss_language_preferences(instance.language, policy)
    analyses, _ = morph.analyze_mwe(instance.mwe, instance.language, lexicon)
    glosses: list[str] = []
    for analysis in analyses:
        glosses.extend(_word_glosses(analysis.lemma, instance.language, index, preferences))

    used = len(baseline.text.split())
    kept: list[str] = []
    for gloss in glosses:
        kept.append(gloss)
        used += 1 + len(gloss.split())
    while kept and used > token_budget:
        dropped = kept.pop()
        used -= 1 + len(dropped.split())

    text = baseline.text + "".join(f" {SEP} {gloss}" for gloss in kept)
    return SequenceRecord(
        instance_id=instance.id,
        text=text,
        label=instance.label,
        variant=policy,
    )


def build_sequences(
    instances: Iterable[Instance],
    variant: Variant,
    index: MultiWordnetIndex | None = None,
    lexicon: morph.MorphLexicon | None = None,
    token_budget: int = DEFAULT_TOKEN_BUDGET,
) -> list[SequenceRecord]:
    if variant is Variant.BASELINE:
        return [build_baseline_sequence(instance) for instance in instances]
    if index is None:
        raise DataError("gloss variants need a knowledge-base index")
    if lexicon is None:
        lexicon = morph.MorphLexicon()
    return [
        build_gloss_sequence(instance, index, lexicon, variant, token_budget)
        for instance in instances
    ]


def write_sequences(
    path: str,
    records: Sequence[SequenceRecord],
    *,
    provenance: Sequence[str] | None = None,
) -> None:
    rows = [
        (
            record.instance_id,
            record.variant.value,
            record.label.value if record.label is not None else "",
            record.text,
        )
        for record in records
    ]
    write_rows(path, rows, provenance=provenance)


def read_sequences(path: str) -> list[SequenceRecord]:
    records = []
    for lineno, (instance_id, variant, label, text) in read_rows(path, 4):
        try:
            records.append(
                SequenceRecord(
                    instance_id=instance_id,
                    text=text,
                    label=Label.parse(label) if label else None,
                    variant=Variant.parse(variant),
                )
            )
        except DataError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    return records
