"""Training and inference for the sequence classifier.

The built-in "toy-bert" preset is a small randomly initialized transformer
encoder sized for CPU work: masked mean pooling over token states, a
per-feature standardizer fitted on the training set, and a linear
classification head. The head starts at zero and trains with a higher
learning rate than the encoder, the usual arrangement for a freshly
initialized head, which is what lets the small default learning rate reach
a confident fit on tiny datasets within the default epoch budget.
"""

from __future__ import annotations

import json
import random
import warnings
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import torch
from transformers import BertConfig, BertModel, BertTokenizerFast

from .errors import DataError, UsageError
from .sequences import (
    LABELS,
    PredictionRow,
    SequenceRow,
    provenance_lines,
    read_sequences,
    write_predictions,
)

SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")
HEAD_LR_MULTIPLIER = 100.0

ENCODER_PRESETS = {
    "toy-bert": {
        "hidden_size": 64,
        "num_hidden_layers": 2,
        "num_attention_heads": 2,
        "intermediate_size": 128,
    },
}


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    max_sequence_length: int = 256
    learning_rate: float = 2e-5
    batch_size: int = 16
    seed: int = 13
    model_name: str = "toy-bert"

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise UsageError("epochs must be >= 0")
        if self.max_sequence_length < 8:
            raise UsageError("max_sequence_length must be >= 8")
        if self.learning_rate <= 0:
            raise UsageError("learning_rate must be positive")
        if self.batch_size < 1:
            raise UsageError("batch_size must be >= 1")
        if self.model_name not in ENCODER_PRESETS:
            known = ", ".join(sorted(ENCODER_PRESETS))
            raise UsageError(f"unknown model preset {self.model_name!r}; available: {known}")


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    loss: float
    accuracy: float


# ---- tokenization ----


def _pretokenize(text: str) -> list[str]:
    """Lowercase and split the way the tokenizer's basic pass will, so the
    generated vocabulary covers whole words; accents are kept."""
    pieces = []
    for chunk in text.split():
        if chunk in SPECIAL_TOKENS:
            continue
        chunk = chunk.lower()
        run = ""
        for ch in chunk:
            if ch.isalnum():
                run += ch
            else:
                if run:
                    pieces.append(run)
                    run = ""
                pieces.append(ch)
        if run:
            pieces.append(run)
    return pieces


def build_vocab(texts: Sequence[str]) -> list[str]:
    vocab = list(SPECIAL_TOKENS)
    seen = set(vocab)
    for text in texts:
        for piece in _pretokenize(text):
            if piece not in seen:
                seen.add(piece)
                vocab.append(piece)
    return vocab


def load_tokenizer(vocab_file: str | Path) -> BertTokenizerFast:
    path = Path(vocab_file)
    expected = sum(1 for line in path.read_text(encoding="utf-8").splitlines() if line)
    # vocabulary path goes positionally: the parameter name differs across
    # library versions and a misspelled keyword is swallowed silently
    tokenizer = BertTokenizerFast(str(path), do_lower_case=True, strip_accents=False)
    if len(tokenizer.get_vocab()) < expected:
        raise DataError(f"tokenizer loaded {len(tokenizer.get_vocab())} of {expected} vocabulary entries from {path}")
    return tokenizer


def encode_texts(tokenizer, texts: Sequence[str], max_sequence_length: int):
    """Subword-encode with padding to the longest sequence and truncation at
    exactly max_sequence_length tokens including the added specials."""
    return tokenizer(
        list(texts),
        padding=True,
        truncation=True,
        max_length=max_sequence_length,
        return_tensors="pt",
    )


# ---- model ----


class SequenceClassifier(torch.nn.Module):
    def __init__(self, config: BertConfig):
        super().__init__()
        self.encoder = BertModel(config, add_pooling_layer=False)
        self.register_buffer("feature_mean", torch.zeros(config.hidden_size))
        self.register_buffer("feature_scale", torch.ones(config.hidden_size))
        self.classifier = torch.nn.Linear(config.hidden_size, len(LABELS))
        torch.nn.init.zeros_(self.classifier.weight)
        torch.nn.init.zeros_(self.classifier.bias)

    def features(self, input_ids, attention_mask):
        states = self.encoder(
            input_ids=input_ids, attention_mask=attention_mask
        ).last_hidden_state
        mask = attention_mask.unsqueeze(-1).to(states.dtype)
        return (states * mask).sum(dim=1) / mask.sum(dim=1)

    def forward(self, input_ids, attention_mask):
        pooled = self.features(input_ids, attention_mask)
        standardized = (pooled - self.feature_mean) / self.feature_scale
        return self.classifier(standardized)


def _batches(n: int, batch_size: int, order: Sequence[int] | None = None):
    idx = list(order) if order is not None else list(range(n))
    for start in range(0, n, batch_size):
        yield torch.tensor(idx[start : start + batch_size])


def _dataset_accuracy(model, encoded, labels, batch_size: int) -> float:
    model.eval()
    correct = 0
    with torch.no_grad():
        for idx in _batches(len(labels), batch_size):
            logits = model(encoded["input_ids"][idx], encoded["attention_mask"][idx])
            correct += int((logits.argmax(dim=-1) == labels[idx]).sum())
    return correct / len(labels)


# ---- training ----


def _read_training_rows(paths: Sequence[Path]) -> list[SequenceRow]:
    rows = []
    for path in paths:
        rows.extend(read_sequences(path))
    if not rows:
        raise DataError("no sequences to train on")
    for row in rows:
        if not row.label:
            raise DataError(
                f"unlabeled sequence {row.instance_id!r}; training requires labels"
            )
    return rows


def fine_tune(
    sequence_files: str | Path | Sequence[str | Path],
    out_dir: str | Path,
    config: TrainConfig = TrainConfig(),
) -> list[EpochMetrics]:
    """Train a classifier on one or more labeled sequence files and save the
    artifact (vocabulary, weights, config, per-epoch metrics) to out_dir."""
    if isinstance(sequence_files, (str, Path)):
        sequence_files = [sequence_files]
    paths = [Path(p) for p in sequence_files]
    rows = _read_training_rows(paths)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    vocab = build_vocab([row.text for row in rows])
    vocab_file = out_dir / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = load_tokenizer(vocab_file)

    torch.manual_seed(config.seed)
    encoder_config = BertConfig(
        vocab_size=len(vocab),
        max_position_embeddings=config.max_sequence_length,
        type_vocab_size=2,
        **ENCODER_PRESETS[config.model_name],
    )
    model = SequenceClassifier(encoder_config)

    encoded = encode_texts(tokenizer, [row.text for row in rows], config.max_sequence_length)
    labels = torch.tensor([LABELS.index(row.label) for row in rows])

    # standardizer is fitted on the initial features, then kept frozen
    model.eval()
    with torch.no_grad():
        feats = torch.cat(
            [
                model.features(encoded["input_ids"][idx], encoded["attention_mask"][idx])
                for idx in _batches(len(rows), config.batch_size)
            ]
        )
    model.feature_mean.copy_(feats.mean(dim=0))
    model.feature_scale.copy_(feats.std(dim=0).clamp_min(1e-6))

    optimizer = torch.optim.AdamW(
        [
            {"params": model.encoder.parameters(), "lr": config.learning_rate},
            {
                "params": model.classifier.parameters(),
                "lr": config.learning_rate * HEAD_LR_MULTIPLIER,
            },
        ]
    )
    shuffler = random.Random(config.seed)
    metrics = []
    for epoch in range(1, config.epochs + 1):
        order = list(range(len(rows)))
        shuffler.shuffle(order)
        model.train()
        losses = []
        for idx in _batches(len(rows), config.batch_size, order):
            logits = model(encoded["input_ids"][idx], encoded["attention_mask"][idx])
            loss = torch.nn.functional.cross_entropy(logits, labels[idx])
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
        accuracy = _dataset_accuracy(model, encoded, labels, config.batch_size)
        metrics.append(EpochMetrics(epoch, sum(losses) / len(losses), accuracy))

    variants = sorted({row.variant for row in rows})
    meta = {
        "format": 1,
        "model_name": config.model_name,
        "max_sequence_length": config.max_sequence_length,
        "labels": list(LABELS),
        "variant": variants[0] if len(variants) == 1 else "mixed",
        "seed": config.seed,
        "epochs": config.epochs,
        "encoder": encoder_config.to_dict(),
    }
    (out_dir / "config.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    torch.save(model.state_dict(), out_dir / "model.pt")

    inputs = {f"sequences{k}" if len(paths) > 1 else "sequences": p for k, p in enumerate(paths)}
    header = provenance_lines(
        inputs,
        params={
            "batch_size": config.batch_size,
            "epochs": config.epochs,
            "learning_rate": config.learning_rate,
            "max_sequence_length": config.max_sequence_length,
            "model_name": config.model_name,
            "seed": config.seed,
        },
    )
    with open(out_dir / "metrics.tsv", "w", encoding="utf-8", newline="\n") as fh:
        for line in header:
            fh.write(line + "\n")
        for m in metrics:
            fh.write(f"{m.epoch}\t{m.loss!r}\t{m.accuracy!r}\n")
    return metrics


# ---- inference ----


def load_artifact(model_dir: str | Path):
    """Rebuild the classifier and tokenizer saved by fine_tune."""
    model_dir = Path(model_dir)
    config_file = model_dir / "config.json"
    if not config_file.exists():
        raise DataError(f"no model artifact at {model_dir}")
    meta = json.loads(config_file.read_text(encoding="utf-8"))
    if meta.get("format") != 1:
        raise DataError(f"unsupported artifact format {meta.get('format')!r}")
    model = SequenceClassifier(BertConfig.from_dict(meta["encoder"]))
    state = torch.load(model_dir / "model.pt", map_location="cpu", weights_only=True)
    model.load_state_dict(state)
    model.eval()
    tokenizer = load_tokenizer(model_dir / "vocab.txt")
    return model, tokenizer, meta


def predict(
    model_dir: str | Path,
    sequences_file: str | Path,
    out_path: str | Path | None = None,
    *,
    batch_size: int = 16,
) -> list[PredictionRow]:
    """Classify every row of a sequences file, in order; labels in the file
    are ignored. Returns the rows and optionally writes predictions.tsv."""
    model_dir = Path(model_dir)
    model, tokenizer, meta = load_artifact(model_dir)
    rows = read_sequences(sequences_file)

    strange = sorted({row.variant for row in rows} - {meta["variant"]})
    if strange and meta["variant"] != "mixed":
        warnings.warn(
            f"sequences variant {', '.join(strange)} differs from the trained "
            f"variant {meta['variant']}; predicting anyway",
            stacklevel=2,
        )

    predictions = []
    if rows:
        encoded = encode_texts(
            tokenizer, [row.text for row in rows], meta["max_sequence_length"]
        )
        probs = []
        with torch.no_grad():
            for idx in _batches(len(rows), batch_size):
                logits = model(encoded["input_ids"][idx], encoded["attention_mask"][idx])
                probs.append(torch.softmax(logits, dim=-1))
        probs = torch.cat(probs)
        idiomatic_index = meta["labels"].index("idiomatic")
        for row, p in zip(rows, probs):
            label = meta["labels"][int(p.argmax())]
            method = "baseline" if row.variant == "baseline" else "gloss-neural"
            rationale = f"p(idiomatic)={p[idiomatic_index].item():.4f}"
            predictions.append(PredictionRow(row.instance_id, label, method, rationale))

    if out_path is not None:
        header = provenance_lines(
            {"model": model_dir / "model.pt", "sequences": sequences_file},
            params={"model_name": meta["model_name"]},
        )
        write_predictions(out_path, predictions, provenance=header)
    return predictions
