"""Command line interface: train on sequence files, predict to predictions.tsv."""

from __future__ import annotations

import argparse
import sys

from .errors import DataError, NeuralshimError, UsageError
from .model import TrainConfig, fine_tune, predict


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neuralshim",
        description="Train and run a sequence classifier for idiomaticity",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fine-tune a classifier on labeled sequences")
    train.add_argument("--sequences", action="append", required=True,
                       help="labeled sequences file; repeat to train on a union")
    train.add_argument("--out-dir", required=True, help="artifact directory")
    train.add_argument("--epochs", type=int, default=20)
    train.add_argument("--max-seq-len", type=int, default=256)
    train.add_argument("--learning-rate", type=float, default=2e-5)
    train.add_argument("--batch-size", type=int, default=16)
    train.add_argument("--seed", type=int, default=13)
    train.add_argument("--model-name", default="toy-bert")

    pred = sub.add_parser("predict", help="classify a sequences file")
    pred.add_argument("--model-dir", required=True)
    pred.add_argument("--sequences", required=True)
    pred.add_argument("--out", required=True, help="predictions file to write")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "train":
            config = TrainConfig(
                epochs=args.epochs,
                max_sequence_length=args.max_seq_len,
                learning_rate=args.learning_rate,
                batch_size=args.batch_size,
                seed=args.seed,
                model_name=args.model_name,
            )
            metrics = fine_tune(args.sequences, args.out_dir, config)
            if metrics:
                last = metrics[-1]
                print(
                    f"trained {last.epoch} epochs, final loss {last.loss:.4f}, "
                    f"training accuracy {last.accuracy:.3f} -> {args.out_dir}"
                )
            else:
                print(f"saved untrained model -> {args.out_dir}")
        else:
            rows = predict(args.model_dir, args.sequences, args.out)
            print(f"{len(rows)} predictions -> {args.out}")
        return 0
    except UsageError as exc:
        print(f"neuralshim: usage error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"neuralshim: data error: {exc}", file=sys.stderr)
        return 3
    except NeuralshimError as exc:
        print(f"neuralshim: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
