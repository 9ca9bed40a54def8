"""Unsupervised translation-based idiomaticity classification.

An MWE is literal when its words are translated literally, i.e. each word
shares a multi-synset with its aligned translation.  Two aggregation modes
exist: ALL requires every content word to pass the test, ONE accepts a
single literal translation as sufficient.  Proper-noun MWEs are literal by
convention and short-circuit the pipeline before any translation is
consulted.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

from . import aligner, morph
from .corpus import Instance, Label, find_token_subsequence
from .errors import DataError
from .lexkb import MultiWordnetIndex, kb_query_languages
from .predictions import Method, Prediction
from .translate import TranslationRecord


class Mode(enum.Enum):
    ONE = "one"
    ALL = "all"

    @property
    def method(self) -> Method:
        return Method.MT_ONE if self is Mode.ONE else Method.MT_ALL


@dataclass(frozen=True)
class WordLiteralness:
    """Outcome of the literal-translation test for one source word."""

    lemma: str
    aligned_targets: tuple[str, ...]
    shared_synset: bool
    is_content: bool

    def __post_init__(self) -> None:
        if self.shared_synset and not self.aligned_targets:
            raise DataError("a word with no aligned targets cannot share a synset")


def word_is_literal(
    analysis: morph.TokenAnalysis,
    aligned_targets: Sequence[str],
    source_lang: str,
    target_lang: str,
    index: MultiWordnetIndex,
    lexicon: morph.MorphLexicon,
) -> WordLiteralness:
    """Test whether any aligned target token shares a synset with the word.

    Target tokens are lemmatized with the target-language lexicon; a word
    with no aligned targets is never literal.
    """
    src_langs = kb_query_languages(source_lang)
    tgt_langs = kb_query_languages(target_lang)
    shared = False
    for token in aligned_targets:
        target_lemma = morph.analyze(token, target_lang, lexicon).lemma
        if index.shares_synset_any(analysis.lemma, src_langs, target_lemma, tgt_langs):
            shared = True
            break
    return WordLiteralness(
        lemma=analysis.lemma,
        aligned_targets=tuple(aligned_targets),
        shared_synset=shared,
        is_content=analysis.is_content,
    )


def _describe(words: Sequence[WordLiteralness]) -> str:
    parts = []
    for w in words:
        targets = ",".join(w.aligned_targets) if w.aligned_targets else "-"
        verdict = "shared" if w.shared_synset else "unshared"
        parts.append(f"{w.lemma}->{targets}:{verdict}")
    return "; ".join(parts)


def classify_mt(
    instance: Instance,
    translation: TranslationRecord | None,
    model: aligner.AlignmentModel,
    index: MultiWordnetIndex,
    lexicon: morph.MorphLexicon,
    mode: Mode,
) -> Prediction:
    """Run the full translation pipeline for one instance.

    Steps: proper-noun short circuit; tokenize and Viterbi-align source and
    translation; repair links against the knowledge base; test each MWE
    content word for literal translation; aggregate by mode.  MWEs with no
    content words fall back to testing every word.
    """
    analyses, has_proper_noun = morph.analyze_mwe(instance.mwe, instance.language, lexicon)
    if has_proper_noun:
        return Prediction(
            instance_id=instance.id,
            label=Label.LITERAL,
            method=mode.method,
            rationale="proper noun",
        )

    if translation is None:
        raise DataError(f"no translation available for instance {instance.id!r}")

    source_tokens = morph.tokenize(instance.target)
    target_tokens = morph.tokenize(translation.translated_target_sentence)
    if not target_tokens:
        raise DataError(f"empty translation for instance {instance.id!r}")
    start = find_token_subsequence(source_tokens, [a.surface for a in analyses])
    if start < 0:
        raise DataError(
            f"MWE {instance.mwe!r} not found in target sentence of instance {instance.id!r}"
        )

    links = aligner.viterbi_align(model, source_tokens, target_tokens)
    links = aligner.refine_with_kb(
        links,
        source_tokens,
        instance.language,
        target_tokens,
        translation.target_language,
        index,
        model,
        lexicon,
    )

    tested = [(offset, a) for offset, a in enumerate(analyses) if a.is_content]
    if not tested:
        tested = list(enumerate(analyses))

    words = []
    for offset, analysis in tested:
        targets = aligner.targets_of_source(links, start + offset, target_tokens)
        words.append(
            word_is_literal(
                analysis, targets, instance.language, translation.target_language, index, lexicon
            )
        )

    if mode is Mode.ALL:
        literal = all(w.shared_synset for w in words)
    else:
        literal = any(w.shared_synset for w in words)

    return Prediction(
        instance_id=instance.id,
        label=Label.LITERAL if literal else Label.IDIOMATIC,
        method=mode.method,
        rationale=_describe(words),
    )
