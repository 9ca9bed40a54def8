"""Shared fixtures: a synthetic separable corpus and a trained artifact."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from neuralshim import TrainConfig, fine_tune

DATA = Path(__file__).parent / "data"

FILLERS = ["the", "a", "day", "night", "walk", "stone", "river", "cloud"]


def separable_rows(n: int = 32, seed: int = 13, variant: str = "gloss-en"):
    """Balanced corpus where the label is decided by an anchor bigram."""
    rng = random.Random(seed)
    rows = []
    for k in range(n):
        anchor = "glimmer frost" if k % 2 == 0 else "plain gravel"
        label = "idiomatic" if k % 2 == 0 else "literal"
        words = [rng.choice(FILLERS) for _ in range(rng.randint(3, 6))]
        cut = rng.randint(0, len(words))
        text = " ".join(words[:cut] + anchor.split() + words[cut:]) + " [SEP] " + anchor
        rows.append((f"s{k:02d}", variant, label, text))
    return rows


def write_rows(path: Path, rows, comment: str | None = None) -> Path:
    lines = []
    if comment is not None:
        lines.append(comment)
    lines.extend("\t".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def corpus_rows():
    return separable_rows()


@pytest.fixture(scope="session")
def corpus_file(corpus_rows, tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "train_sequences.tsv"
    return write_rows(path, corpus_rows, comment="# param:variant=gloss-en")


@pytest.fixture(scope="session")
def trained(corpus_file, tmp_path_factory):
    """One default-config training run shared by the tests that inspect it."""
    out_dir = tmp_path_factory.mktemp("artifact")
    metrics = fine_tune(corpus_file, out_dir, TrainConfig())
    return out_dir, metrics
