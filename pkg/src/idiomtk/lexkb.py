"""Multilingual lexical knowledge base: multi-synset membership and glosses.

A multi-synset groups lemmas from several languages under one concept.
Several knowledge bases can be loaded into one index; membership queries
take the union over all of them, and per-KB queries remain available for
ablation.  Gloss lookups never fail: languages without gloss coverage
simply yield nothing.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from . import tsvio
from .errors import DataError

log = logging.getLogger(__name__)


def normalize_lemma(lemma: str) -> str:
    return " ".join(lemma.split()).lower()


def kb_query_languages(language: str) -> tuple[str, ...]:
    """Languages to probe for a lemma; Galician is also tried as Portuguese."""
    return ("GL", "PT") if language == "GL" else (language,)


@dataclass(frozen=True)
class MultiSynset:
    synset_id: str
    members: frozenset[tuple[str, str]]
    glosses: Mapping[str, str] = field(default_factory=dict)


class KnowledgeBase:
    name: str

    def __init__(self, name: str) -> None:
        self.name = name
        self.synsets: dict[str, MultiSynset] = {}
        self._index: dict[tuple[str, str], set[str]] = {}

    @property
    def n_synsets(self) -> int:
        return len(self.synsets)

    @property
    def n_members(self) -> int:
        return sum(len(s.members) for s in self.synsets.values())

    @property
    def n_glosses(self) -> int:
        return sum(len(s.glosses) for s in self.synsets.values())

    def synset_ids_for(self, lemma: str, language: str) -> list[str]:
        """Synset ids containing the lemma, lexicographically ordered."""
        return sorted(self._index.get((language, normalize_lemma(lemma)), ()))

    def _freeze(
        self,
        members: dict[str, set[tuple[str, str]]],
        glosses: dict[str, dict[str, str]],
    ) -> None:
        for synset_id in members:
            self.synsets[synset_id] = MultiSynset(
                synset_id=synset_id,
                members=frozenset(members[synset_id]),
                glosses=dict(glosses.get(synset_id, {})),
            )
            for lang, lemma in members[synset_id]:
                self._index.setdefault((lang, lemma), set()).add(synset_id)


def load_kb(
    name: str, synset_path: str | Path, gloss_path: str | Path | None = None
) -> KnowledgeBase:
    """Build a knowledge base from synsets.tsv and an optional glosses.tsv.

    Duplicate (synset_id, language, lemma) rows are ignored with a warning;
    a gloss row naming an unknown synset id is an error.
    """
    members: dict[str, set[tuple[str, str]]] = {}
    for lineno, (synset_id, lang, lemma) in tsvio.read_rows(synset_path, 3):
        if not synset_id or not lang or not lemma.strip():
            raise DataError(f"{synset_path}:{lineno}: empty synset id, language or lemma")
        key = (lang, normalize_lemma(lemma))
        entry = members.setdefault(synset_id, set())
        if key in entry:
            log.warning("%s:%d: duplicate member %s/%s in synset %s ignored",
                        synset_path, lineno, lang, lemma, synset_id)
            continue
        entry.add(key)

    glosses: dict[str, dict[str, str]] = {}
    if gloss_path is not None:
        for lineno, (synset_id, lang, gloss) in tsvio.read_rows(gloss_path, 3):
            if synset_id not in members:
                raise DataError(f"{gloss_path}:{lineno}: gloss for unknown synset id {synset_id!r}")
            per_synset = glosses.setdefault(synset_id, {})
            if lang in per_synset:
                if per_synset[lang] != gloss:
                    log.warning("%s:%d: conflicting %s gloss for %s; keeping the first",
                                gloss_path, lineno, lang, synset_id)
                continue
            per_synset[lang] = gloss

    kb = KnowledgeBase(name)
    kb._freeze(members, glosses)
    log.info("loaded KB %s: %d synsets, %d members, %d glosses",
             name, kb.n_synsets, kb.n_members, kb.n_glosses)
    return kb


def save_kb(
    kb: KnowledgeBase,
    synset_path: str | Path,
    gloss_path: str | Path | None = None,
) -> None:
    """Dump a knowledge base back to synsets.tsv / glosses.tsv (sorted rows)."""
    member_rows = sorted(
        (sid, lang, lemma)
        for sid, synset in kb.synsets.items()
        for lang, lemma in synset.members
    )
    tsvio.write_rows(synset_path, member_rows)
    if gloss_path is not None:
        gloss_rows = sorted(
            (sid, lang, gloss)
            for sid, synset in kb.synsets.items()
            for lang, gloss in synset.glosses.items()
        )
        tsvio.write_rows(gloss_path, gloss_rows)


SNAPSHOT_KIND_NAME = "N"
SNAPSHOT_KIND_SYNSET = "S"
SNAPSHOT_KIND_GLOSS = "G"


def save_snapshot(
    kb: KnowledgeBase, path: str | Path, *, provenance: Sequence[str] | None = None
) -> None:
    """Write a single-file snapshot: an N row, then S and G rows (sorted)."""
    rows: list[tuple[str, ...]] = [(SNAPSHOT_KIND_NAME, kb.name, "", "")]
    rows.extend(
        (SNAPSHOT_KIND_SYNSET, sid, lang, lemma)
        for sid, lang, lemma in sorted(
            (sid, lang, lemma)
            for sid, synset in kb.synsets.items()
            for lang, lemma in synset.members
        )
    )
    rows.extend(
        (SNAPSHOT_KIND_GLOSS, sid, lang, gloss)
        for sid, lang, gloss in sorted(
            (sid, lang, gloss)
            for sid, synset in kb.synsets.items()
            for lang, gloss in synset.glosses.items()
        )
    )
    tsvio.write_rows(path, rows, provenance=provenance)


def load_snapshot(path: str | Path) -> KnowledgeBase:
    name: str | None = None
    members: dict[str, set[tuple[str, str]]] = {}
    glosses: dict[str, dict[str, str]] = {}
    for lineno, (kind, a, b, c) in tsvio.read_rows(path, 4):
        if kind == SNAPSHOT_KIND_NAME:
            name = a
        elif kind == SNAPSHOT_KIND_SYNSET:
            members.setdefault(a, set()).add((b, normalize_lemma(c)))
        elif kind == SNAPSHOT_KIND_GLOSS:
            if a not in members:
                raise DataError(f"{path}:{lineno}: gloss for unknown synset id {a!r}")
            glosses.setdefault(a, {})[b] = c
        else:
            raise DataError(f"{path}:{lineno}: unknown snapshot row kind {kind!r}")
    if name is None:
        raise DataError(f"{path}: snapshot has no name row")
    kb = KnowledgeBase(name)
    kb._freeze(members, glosses)
    return kb


class MultiWordnetIndex:
    """Ordered collection of knowledge bases with union query semantics."""

    def __init__(self, kbs: Sequence[KnowledgeBase] = ()) -> None:
        self.kbs: list[KnowledgeBase] = list(kbs)

    def add(self, kb: KnowledgeBase) -> None:
        self.kbs.append(kb)

    def load_kb(
        self, name: str, synset_path: str | Path, gloss_path: str | Path | None = None
    ) -> KnowledgeBase:
        kb = load_kb(name, synset_path, gloss_path)
        self.add(kb)
        return kb

    def _selected(self, kb: str | None) -> list[KnowledgeBase]:
        if kb is None:
            return self.kbs
        for candidate in self.kbs:
            if candidate.name == kb:
                return [candidate]
        raise DataError(f"no knowledge base named {kb!r} is loaded")

    def shares_synset(
        self,
        lemma_a: str,
        lang_a: str,
        lemma_b: str,
        lang_b: str,
        *,
        kb: str | None = None,
    ) -> bool:
        """True iff some synset in any selected KB contains both lemmas."""
        key_a = (lang_a, normalize_lemma(lemma_a))
        key_b = (lang_b, normalize_lemma(lemma_b))
        for base in self._selected(kb):
            ids_a = base._index.get(key_a)
            if not ids_a:
                continue
            ids_b = base._index.get(key_b)
            if ids_b and ids_a & ids_b:
                return True
        return False

    def shares_synset_any(
        self,
        lemma_a: str,
        langs_a: Sequence[str],
        lemma_b: str,
        langs_b: Sequence[str],
    ) -> bool:
        """shares_synset over every language pairing (Galician-as-Portuguese)."""
        return any(
            self.shares_synset(lemma_a, la, lemma_b, lb)
            for la in langs_a
            for lb in langs_b
        )

    def synsets_for(self, lemma: str, lang: str) -> list[MultiSynset]:
        """Synsets containing the lemma, in KB load order then id order."""
        found: list[MultiSynset] = []
        seen: set[tuple[int, str]] = set()
        for position, base in enumerate(self.kbs):
            for synset_id in base.synset_ids_for(lemma, lang):
                if (position, synset_id) not in seen:
                    seen.add((position, synset_id))
                    found.append(base.synsets[synset_id])
        return found

    def glosses_for(self, lemma: str, lang: str, gloss_lang: str) -> list[str]:
        """Gloss texts for each sense of the lemma, deduplicated, stable order."""
        glosses: list[str] = []
        seen: set[str] = set()
        for synset in self.synsets_for(lemma, lang):
            gloss = synset.glosses.get(gloss_lang)
            if gloss is not None and gloss not in seen:
                seen.add(gloss)
                glosses.append(gloss)
        return glosses
