"""Acceptance gate: one test per release criterion, each printing a PASS line.

Every check here has an oracle that does not depend on the code under test:
corpora generated from known dictionaries, brute-force rescans, hand-computed
confusion matrices, planted classification worlds, and frozen golden files.
"""

from __future__ import annotations

import os
import random
import socket
import time
from pathlib import Path

import pytest

from idiomtk import morph
from idiomtk.aligner import train, viterbi_align
from idiomtk.cli import main
from idiomtk.combine import combine, overlay_unatt
from idiomtk.corpus import Instance, Label, load_instances
from idiomtk.evaluation import macro_f1, score
from idiomtk.glossinput import Variant, build_baseline_sequence, build_gloss_sequence, build_sequences, write_sequences
from idiomtk.lexkb import MultiWordnetIndex, load_kb, normalize_lemma
from idiomtk.mtclassify import Mode, classify_mt
from idiomtk.predictions import Method, Prediction
from idiomtk.translate import TranslationRecord
from idiomtk.unatt import build_table, unatt_precision_recall

from conftest import FIXTURES, GOLDEN, hand_model

I, L = Label.IDIOMATIC, Label.LITERAL


def accept(slug: str) -> None:
    print(f"ACCEPT {slug}: PASS")


def monotone_corpus(rng: random.Random, n_pairs: int, vocab: int) -> list:
    pairs = []
    for _ in range(n_pairs):
        ids = rng.sample(range(vocab), rng.randint(4, 7))
        pairs.append(([f"s{k:02d}" for k in ids], [f"t{k:02d}" for k in ids]))
    return pairs


def test_aligner_recovers_generated_dictionary():
    rng = random.Random(20260819)
    bitext = monotone_corpus(rng, 500, 50)
    started = time.perf_counter()
    model = train(bitext, iterations=5)
    matched = 0
    total = 0
    for source, target in bitext:
        links = viterbi_align(model, source, target)
        gold = {(i, i) for i in range(len(source))}
        matched += len(links.links & gold)
        total += len(gold)
    elapsed = time.perf_counter() - started
    assert matched / total >= 0.95, f"recovered {matched}/{total} links"
    assert elapsed < 10.0, f"took {elapsed:.1f}s"

    small = monotone_corpus(random.Random(7), 50, 20)
    history = train(small, iterations=8, alpha=0.0).log_likelihoods
    for before, after in zip(history, history[1:]):
        assert after >= before - 1e-9
    accept("aligner-dictionary-recovery")


def test_synset_sharing_agrees_with_brute_force(tmp_path):
    rng = random.Random(97)
    lemmas = [f"l{k:03d}" for k in range(120)]
    languages = ("EN", "PT", "IT", "GL")
    index = MultiWordnetIndex()
    for name, offset in (("one", 0), ("two", 100)):
        rows = []
        for k in range(100):
            members = rng.sample(lemmas, rng.randint(2, 5))
            for lemma in members:
                rows.append(f"x.{offset + k}\t{rng.choice(languages)}\t{lemma}")
        path = tmp_path / f"{name}.tsv"
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        index.add(load_kb(name, path))

    def brute_force(lemma_a, lang_a, lemma_b, lang_b):
        key_a = (lang_a, normalize_lemma(lemma_a))
        key_b = (lang_b, normalize_lemma(lemma_b))
        return any(
            key_a in synset.members and key_b in synset.members
            for kb in index.kbs
            for synset in kb.synsets.values()
        )

    pool = lemmas + ["zz1", "zz2", "zz3"]
    disagreements = 0
    positives = 0
    for _ in range(1000):
        lemma_a, lemma_b = rng.choice(pool), rng.choice(pool)
        lang_a, lang_b = rng.choice(languages), rng.choice(languages)
        expected = brute_force(lemma_a, lang_a, lemma_b, lang_b)
        positives += expected
        if index.shares_synset(lemma_a, lang_a, lemma_b, lang_b) != expected:
            disagreements += 1
    assert disagreements == 0
    assert positives > 0
    accept("synset-sharing-brute-force")


def planted_world(seed: int, n_instances: int):
    """Instances whose correct alignment and synset sharing are known by
    construction: word w{k} translates to v{k}, and the pair shares a synset
    for exactly half the vocabulary."""
    rng = random.Random(seed)
    n_words = 40
    shared = set(rng.sample(range(n_words), n_words // 2))
    ttable = {f"w{k:02d}": [f"v{k:02d}"] for k in range(n_words)}
    model = hand_model(ttable, {f"v{k:02d}" for k in range(n_words)})
    synset_rows = "\n".join(
        f"p.{k}\tEN\tw{k:02d}\np.{k}\tIT\tv{k:02d}" for k in sorted(shared)
    )
    lexicon = morph.MorphLexicon()

    worlds = []
    for n in range(n_instances):
        if n % 10 == 0:
            instance = Instance(
                id=f"p{n:04d}", language="EN", mwe="Kags Borin",
                prev="", target="Kags Borin w00 w01", next="", label=None,
            )
            worlds.append((instance, None, None))
            continue
        ids = rng.sample(range(n_words), rng.randint(4, 7))
        split = rng.randint(0, len(ids) - 2)
        mwe_ids = ids[split:split + 2]
        source = " ".join(f"w{k:02d}" for k in ids)
        target = " ".join(f"v{k:02d}" for k in ids)
        instance = Instance(
            id=f"p{n:04d}", language="EN", mwe=f"w{mwe_ids[0]:02d} w{mwe_ids[1]:02d}",
            prev="", target=source, next="", label=None,
        )
        record = TranslationRecord(instance.id, "IT", target)
        expected_one = L if any(k in shared for k in mwe_ids) else I
        expected_all = L if all(k in shared for k in mwe_ids) else I
        worlds.append((instance, record, (expected_all, expected_one)))
    return worlds, model, synset_rows, lexicon


def test_aggregation_modes_are_consistent_over_planted_instances(tmp_path):
    worlds, model, synset_rows, lexicon = planted_world(20260819, 1000)
    path = tmp_path / "planted.tsv"
    path.write_text(synset_rows + "\n", encoding="utf-8")
    index = MultiWordnetIndex()
    index.add(load_kb("planted", path))

    checked = strict_cases = 0
    for instance, record, expected in worlds:
        under_all = classify_mt(instance, record, model, index, lexicon, Mode.ALL)
        under_one = classify_mt(instance, record, model, index, lexicon, Mode.ONE)
        if expected is None:
            assert under_all.label is L and under_one.label is L
            assert under_all.rationale == "proper noun"
            continue
        if under_all.label is L:
            assert under_one.label is L, instance.id
        assert (under_all.label, under_one.label) == expected, instance.id
        checked += 1
        strict_cases += under_all.label is I and under_one.label is L
    assert checked >= 890
    assert strict_cases > 100
    accept("aggregation-mode-monotonicity")


def test_combination_rules_enumerated():
    for label_a in (I, L):
        for label_b in (I, L):
            for default in (I, L):
                merged = combine(
                    Prediction("e", label_a, Method.MT_ONE),
                    Prediction("e", label_b, Method.MT_ALL),
                    default,
                )
                expected = label_a if label_a is label_b else default
                assert merged.label is expected
                assert merged.method is Method.COMBINED
    answer = Prediction("e", I, Method.UNATT)
    fallback = Prediction("e", L, Method.COMBINED)
    assert overlay_unatt(answer, fallback) is answer
    assert overlay_unatt(None, fallback) is fallback
    accept("combination-truth-table")


def test_attestation_precision_and_recall_on_constructed_data():
    rng = random.Random(5)
    types = [f"mwe {k}" for k in range(30)]
    train_rows = []
    sole_class = {}
    for k, mwe in enumerate(types[:20]):
        label = I if k % 2 == 0 else L
        sole_class[mwe] = label
        for n in range(rng.randint(1, 4)):
            train_rows.append(
                Instance(f"t{k}_{n}", "EN", mwe, "", f"x {mwe} y", "", label)
            )
    table = build_table(train_rows)

    dev = []
    for k, mwe in enumerate(types):
        gold = sole_class.get(mwe, I if k % 3 == 0 else L)
        dev.append(Instance(f"d{k}", "EN", mwe, "", f"x {mwe} y", "", gold))
    precision, recall, answered, correct = unatt_precision_recall(dev, table)
    assert precision == 1.0
    assert answered == correct == 20
    assert recall == 20 / len(dev)
    accept("attestation-synthetic-scores")


def test_attestation_official_scores():
    root = os.environ.get("IDIOMTK_OFFICIAL_DATA")
    if not root:
        pytest.skip("official evaluation data not supplied; set IDIOMTK_OFFICIAL_DATA")
    train = load_instances(Path(root) / "train.tsv", require_labels=True)
    dev = load_instances(Path(root) / "dev.tsv", require_labels=True)
    assert len(dev) == 739
    precision, recall, _, _ = unatt_precision_recall(list(dev), build_table(train))
    assert precision == pytest.approx(0.983, abs=0.005)
    assert recall == pytest.approx(0.558, abs=0.005)
    accept("attestation-official-scores")


def test_macro_f1_matches_hand_computed_values(instances):
    assert macro_f1([I, I, L, L], [I, L, L, L]) == pytest.approx(11 / 15, abs=1e-9)
    assert macro_f1([I, L], [I, L]) == 1.0
    assert macro_f1([I, I, L], [L, L, I]) == 0.0

    swap = {I: L, L: I}
    predictions = [
        Prediction(inst.id, inst.label if k % 3 else swap[inst.label], Method.BASELINE)
        for k, inst in enumerate(instances)
    ]
    report = score(list(instances), predictions, setting="s", method="m")
    by_id = {p.instance_id: p.label for p in predictions}
    merged = macro_f1(
        [inst.label for inst in instances], [by_id[inst.id] for inst in instances]
    )
    assert report.scores["ALL"] == merged
    accept("macro-f1-oracle")


def test_sequences_match_frozen_goldens(tmp_path, instances, index, lexicon):
    goldens = {
        Variant.BASELINE: "sequences_baseline.tsv",
        Variant.GLOSS_EN: "sequences_gloss_en.tsv",
        Variant.GLOSS_SRC: "sequences_gloss_src.tsv",
    }
    for variant, name in goldens.items():
        records = build_sequences(instances, variant, index=index, lexicon=lexicon)
        out = tmp_path / name
        write_sequences(out, records)
        assert out.read_bytes() == (GOLDEN / name).read_bytes(), name

    empty = MultiWordnetIndex()
    for inst in instances:
        gloss = build_gloss_sequence(inst, empty, lexicon, Variant.GLOSS_EN)
        assert gloss.text == build_baseline_sequence(inst).text
    accept("sequence-golden-files")


def test_pipeline_is_deterministic_and_offline(tmp_path, monkeypatch):
    def deny(*args, **kwargs):
        raise AssertionError("network access attempted during offline pipeline")

    monkeypatch.setattr(socket, "socket", deny)
    monkeypatch.setattr(socket, "create_connection", deny)

    def run_pipeline(root: Path) -> list[bytes]:
        root.mkdir()
        steps = [
            ["build-kb", "--name", "alpha", "--synsets", FIXTURES / "synsets_alpha.tsv",
             "--glosses", FIXTURES / "glosses_alpha.tsv", "--out", root / "kb_alpha.tsv"],
            ["build-kb", "--name", "beta", "--synsets", FIXTURES / "synsets_beta.tsv",
             "--glosses", FIXTURES / "glosses_beta.tsv", "--out", root / "kb_beta.tsv"],
            ["train-aligner", "--bitext", FIXTURES / "bitext.tsv",
             "--translations", FIXTURES / "translations.tsv",
             "--instances", FIXTURES / "instances.tsv", "--out", root / "model.tsv"],
            ["classify", "--method", "mt-all", "--instances", FIXTURES / "instances.tsv",
             "--model", root / "model.tsv", "--kb", root / "kb_alpha.tsv",
             "--kb", root / "kb_beta.tsv", "--cache", FIXTURES / "translations.tsv",
             "--lexicon", FIXTURES / "lexicon.tsv", "--out", root / "pred.tsv"],
            ["evaluate", "--gold", FIXTURES / "instances.tsv", "--pred", root / "pred.tsv",
             "--out", root / "report.tsv"],
        ]
        for argv in steps:
            assert main([str(a) for a in argv]) == 0
        return [
            (root / name).read_bytes()
            for name in ("kb_alpha.tsv", "kb_beta.tsv", "model.tsv", "pred.tsv", "report.tsv")
        ]

    first = run_pipeline(tmp_path / "run1")
    second = run_pipeline(tmp_path / "run2")
    assert first == second
    accept("offline-pipeline-determinism")
