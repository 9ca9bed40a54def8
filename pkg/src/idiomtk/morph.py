"""Tokenization and lexicon-driven lemmatization / POS tagging.

The tagger is deliberately simple: a lookup table of per-language analyses
with a capitalization fallback for unknown tokens.  Galician lookups fall
back to the Portuguese entries, which share most surface forms.
"""

from __future__ import annotations

import string
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from . import tsvio
from .errors import DataError

CONTENT_POS = frozenset({"NOUN", "VERB", "ADJ", "ADV"})
POS_TAGS = CONTENT_POS | {"PROPN", "OTHER"}


@dataclass(frozen=True)
class TokenAnalysis:
    surface: str
    lemma: str
    pos: str

    def __post_init__(self) -> None:
        if not self.lemma:
            raise DataError(f"empty lemma for token {self.surface!r}")
        if self.pos not in POS_TAGS:
            raise DataError(f"unknown POS tag {self.pos!r} for token {self.surface!r}")

    @property
    def is_content(self) -> bool:
        return self.pos in CONTENT_POS


class MorphLexicon:
    """Mapping ``(language, lower-cased surface) -> [(lemma, pos), ...]``.

    The first analysis listed for a key is the default one.
    """

    def __init__(self) -> None:
        self._entries: dict[tuple[str, str], list[tuple[str, str]]] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, language: str, surface: str, lemma: str, pos: str) -> None:
        if pos not in POS_TAGS:
            raise DataError(f"unknown POS tag {pos!r} for {language}/{surface}")
        key = (language, surface.lower())
        self._entries.setdefault(key, []).append((lemma, pos))

    def lookup(self, language: str, surface: str) -> tuple[str, str] | None:
        """Default analysis for a surface form; Galician falls back to Portuguese."""
        analyses = self._entries.get((language, surface.lower()))
        if analyses is None and language == "GL":
            analyses = self._entries.get(("PT", surface.lower()))
        return analyses[0] if analyses else None

    @classmethod
    def load(cls, path: str | Path) -> "MorphLexicon":
        """Read a ``lang<TAB>surface<TAB>lemma<TAB>pos`` file (no header)."""
        lexicon = cls()
        for lineno, (lang, surface, lemma, pos) in tsvio.read_rows(path, 4):
            if not surface or not lemma:
                raise DataError(f"{path}:{lineno}: empty surface or lemma")
            lexicon.add(lang, surface, lemma, pos)
        return lexicon


def _is_punct(ch: str) -> bool:
    return ch in string.punctuation or unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Split on whitespace, then peel leading/trailing punctuation into own tokens."""
    tokens: list[str] = []
    for chunk in text.split():
        start = 0
        end = len(chunk)
        while start < end and _is_punct(chunk[start]):
            start += 1
        while end > start and _is_punct(chunk[end - 1]):
            end -= 1
        tokens.extend(chunk[:start])
        if end > start:
            tokens.append(chunk[start:end])
        tokens.extend(chunk[end:])
    return tokens


def analyze(token: str, language: str, lexicon: MorphLexicon) -> TokenAnalysis:
    """Default lexicon analysis, or the capitalization fallback for unknowns.

    Unknown capitalized tokens are tagged PROPN: MWE tokens are matched
    mid-sentence, so capitalization is not a sentence-start artifact here.
    Unknown lowercase tokens default to NOUN so they still take part in
    content-word tests.
    """
    if not token:
        raise DataError("cannot analyze an empty token")
    found = lexicon.lookup(language, token)
    if found is not None:
        lemma, pos = found
        return TokenAnalysis(surface=token, lemma=lemma, pos=pos)
    pos = "PROPN" if token[0].isupper() else "NOUN"
    return TokenAnalysis(surface=token, lemma=token.lower(), pos=pos)


def analyze_mwe(
    mwe: str, language: str, lexicon: MorphLexicon
) -> tuple[list[TokenAnalysis], bool]:
    """Per-token analyses of an MWE plus a flag for any proper-noun token."""
    if not mwe.strip():
        raise DataError("cannot analyze an empty MWE")
    analyses = [analyze(token, language, lexicon) for token in tokenize(mwe)]
    has_proper_noun = any(a.pos == "PROPN" for a in analyses)
    return analyses, has_proper_noun
