"""Shared fixtures: the trilingual corpus, knowledge bases, and a hand-built
alignment model whose link choices are fully determined by construction."""

from __future__ import annotations

from pathlib import Path

import pytest

from idiomtk import morph
from idiomtk.aligner import AlignmentModel
from idiomtk.corpus import load_instances
from idiomtk.lexkb import MultiWordnetIndex, load_kb
from idiomtk.translate import TranslationCache

FIXTURES = Path(__file__).parent / "data" / "fixtures"
GOLDEN = Path(__file__).parent / "data" / "golden"

# Lexical choices the toy translator makes, per source token.  Designed pairs
# carry almost all of each row's mass; everything else sits on a floor so far
# below the null score that undesigned target tokens always align to null.
HAND_TTABLE: dict[str, list[str]] = {
    # EN -> IT
    "closed": ["chiuso"],
    "book": ["libro"],
    "wedding": ["matrimonio"],
    "anniversary": ["anniversario"],
    "fish": ["pesce"],
    "story": ["storia"],
    "old": ["vecchia", "vecchio"],
    "flame": ["fiamma"],
    "vest": ["salvagente"],
    "kicked": ["morto"],
    "economic": ["economici"],
    "aid": ["aiuti"],
    # PT -> EN
    "ajuda": ["aid"],
    "económica": ["economic"],
    "pão": ["bread", "miser"],
    "duro": ["hard"],
    "braço": ["arm", "assistant"],
    "direito": ["right"],
    # GL -> EN
    "axuda": ["aid"],
    "facer": ["courting"],
    "chover": ["pouring"],
    "libro": ["book"],
    "aberto": ["open"],
}


def hand_model(
    rows: dict[str, list[str]],
    target_vocab: set[str],
    *,
    tension: float = 4.0,
    null_prob: float = 0.08,
) -> AlignmentModel:
    eps = 1e-6
    vocab = set(target_vocab)
    for targets in rows.values():
        vocab.update(targets)
    ttable: dict[str | None, dict[str, float]] = {}
    floors: dict[str | None, float] = {}
    for source, targets in rows.items():
        share = (1.0 - eps) / len(targets)
        ttable[source] = {t: share for t in targets}
        rest = len(vocab) - len(targets)
        floors[source] = eps / rest if rest else 0.0
    ttable[None] = {}
    floors[None] = 1.0 / len(vocab)
    return AlignmentModel(
        ttable=ttable,
        floors=floors,
        tension=tension,
        null_prob=null_prob,
        alpha=0.0,
        source_vocab=frozenset(rows),
        target_vocab=frozenset(vocab),
        log_likelihoods=(),
    )


@pytest.fixture(scope="session")
def instances():
    return load_instances(FIXTURES / "instances.tsv", require_labels=True)


@pytest.fixture(scope="session")
def train_instances():
    return load_instances(FIXTURES / "train.tsv", require_labels=True)


@pytest.fixture(scope="session")
def lexicon():
    return morph.MorphLexicon.load(FIXTURES / "lexicon.tsv")


@pytest.fixture(scope="session")
def index():
    idx = MultiWordnetIndex()
    idx.add(load_kb("alpha", FIXTURES / "synsets_alpha.tsv", FIXTURES / "glosses_alpha.tsv"))
    idx.add(load_kb("beta", FIXTURES / "synsets_beta.tsv", FIXTURES / "glosses_beta.tsv"))
    return idx


@pytest.fixture(scope="session")
def cache():
    return TranslationCache.load(FIXTURES / "translations.tsv")


@pytest.fixture(scope="session")
def toy_model(cache):
    vocab: set[str] = set()
    for _, _, sentence in cache.items():
        vocab.update(morph.tokenize(sentence))
    return hand_model(HAND_TTABLE, vocab)
