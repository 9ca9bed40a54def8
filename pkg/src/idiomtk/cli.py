"""Command-line entry point: batch workflows over the toolkit's file formats.

Every subcommand is deterministic given its input files; nothing touches the
network unless ``--provider`` is passed.  Outputs carry a provenance header
recording input content hashes and parameters.  Exit codes: 0 success,
2 usage error, 3 data error, 4 provider error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path

from . import aligner, evaluation, glossinput, lexkb, morph, unatt
from .combine import combine, overlay_unatt
from .corpus import Dataset, Instance, Label, load_instances
from .errors import DataError, IdiomtkError, ProviderError, UsageError
from .mtclassify import Mode, classify_mt
from .predictions import Prediction, read_predictions, write_predictions
from .translate import (
    DEFAULT_ROUTES,
    HttpJsonProvider,
    TranslationCache,
    TranslationRecord,
    translate_instance,
)
from .tsvio import provenance_lines

PROG = "idiomtk"


def _parse_routes(pairs: Sequence[str] | None) -> dict[str, str]:
    routes = dict(DEFAULT_ROUTES)
    for pair in pairs or ():
        src, sep, tgt = pair.partition("=")
        if not sep or not src or not tgt:
            raise UsageError(f"malformed route {pair!r}; expected SRC=TGT")
        routes[src.upper()] = tgt.upper()
    return routes


def _load_index(snapshot_paths: Sequence[str]) -> lexkb.MultiWordnetIndex:
    index = lexkb.MultiWordnetIndex()
    for path in snapshot_paths:
        index.add(lexkb.load_snapshot(path))
    return index


def _load_lexicon(path: str | None) -> morph.MorphLexicon:
    return morph.MorphLexicon.load(path) if path else morph.MorphLexicon()


def _require(args: argparse.Namespace, names: Sequence[str], because: str) -> None:
    missing = [name for name in names if not getattr(args, name.replace("-", "_"))]
    if missing:
        flags = ", ".join(f"--{name}" for name in missing)
        raise UsageError(f"{because} requires {flags}")


# ---- Subcommands


def cmd_build_kb(args: argparse.Namespace) -> int:
    kb = lexkb.load_kb(args.name, args.synsets, args.glosses)
    inputs = {"synsets": args.synsets}
    if args.glosses:
        inputs["glosses"] = args.glosses
    lexkb.save_snapshot(
        kb, args.out, provenance=provenance_lines(inputs, {"name": args.name})
    )
    print(
        f"kb {kb.name}: {kb.n_synsets} synsets, {kb.n_members} members, "
        f"{kb.n_glosses} glosses -> {args.out}"
    )
    return 0


def _translation_pairs(
    dataset: Dataset, cache: TranslationCache, routes: Mapping[str, str]
) -> tuple[list[tuple[list[str], list[str]]], int]:
    pairs = []
    skipped = 0
    for instance in dataset:
        target_lang = routes.get(instance.language, DEFAULT_ROUTES[instance.language])
        sentence = cache.get(instance.id, target_lang)
        if sentence is None:
            skipped += 1
            continue
        source_tokens = morph.tokenize(instance.target)
        target_tokens = morph.tokenize(sentence)
        if source_tokens and target_tokens:
            pairs.append((source_tokens, target_tokens))
    return pairs, skipped


def cmd_train_aligner(args: argparse.Namespace) -> int:
    pairs: list[tuple[list[str], list[str]]] = []
    inputs: dict[str, str] = {}
    for position, path in enumerate(args.bitext):
        pairs.extend(aligner.load_bitext(path))
        inputs[f"bitext{position}"] = path
    skipped = 0
    if args.translations:
        _require(args, ["instances"], "--translations")
        dataset = load_instances(args.instances)
        cache = TranslationCache.load(args.translations)
        routes = _parse_routes(args.route)
        extra, skipped = _translation_pairs(dataset, cache, routes)
        pairs.extend(extra)
        inputs["translations"] = args.translations
        inputs["instances"] = args.instances
    if not pairs:
        raise UsageError("nothing to train on; pass --bitext and/or --translations")
    params = {
        "iters": args.iters,
        "lambda": args.tension,
        "p0": args.p0,
        "alpha": args.alpha,
    }
    model = aligner.train(
        pairs,
        iterations=args.iters,
        tension=args.tension,
        null_prob=args.p0,
        alpha=args.alpha,
    )
    aligner.save_model(model, args.out, provenance=provenance_lines(inputs, params))
    note = f", {skipped} instances skipped (untranslated)" if skipped else ""
    print(f"trained on {len(pairs)} pairs in {args.iters} iterations{note} -> {args.out}")
    return 0


def cmd_translate(args: argparse.Namespace) -> int:
    dataset = load_instances(args.instances)
    cache = TranslationCache.load(args.cache) if Path(args.cache).exists() else TranslationCache()
    provider = None
    if args.provider:
        provider = HttpJsonProvider(args.provider, credential_env=args.credential_env)
    routes = _parse_routes(args.route)
    for instance in dataset:
        translate_instance(instance, cache, provider, routes)
    params: dict[str, object] = {"provider": args.provider or "none"}
    cache.save(
        args.cache,
        provenance=provenance_lines({"instances": args.instances}, params),
    )
    print(f"{len(cache)} cached translations -> {args.cache}")
    return 0


def _prediction_map(path: str) -> dict[str, Prediction]:
    by_id: dict[str, Prediction] = {}
    for prediction in read_predictions(path):
        if prediction.instance_id in by_id:
            raise DataError(f"{path}: duplicate prediction for {prediction.instance_id!r}")
        by_id[prediction.instance_id] = prediction
    return by_id


def cmd_classify(args: argparse.Namespace) -> int:
    dataset = load_instances(args.instances)
    inputs: dict[str, str] = {"instances": args.instances}
    params: dict[str, object] = {"method": args.method}

    needs_mt = args.method in ("mt-one", "mt-all", "combined")
    mt_predict = None
    if needs_mt:
        _require(args, ["model", "kb", "cache"], f"--method {args.method}")
        model = aligner.load_model(args.model)
        index = _load_index(args.kb)
        lexicon = _load_lexicon(args.lexicon)
        cache = TranslationCache.load(args.cache)
        routes = _parse_routes(args.route)
        inputs["model"] = args.model
        inputs["cache"] = args.cache
        for position, path in enumerate(args.kb):
            inputs[f"kb{position}"] = path
        if args.lexicon:
            inputs["lexicon"] = args.lexicon

        def mt_predict(instance: Instance, mode: Mode) -> Prediction:
            try:
                record: TranslationRecord | None = translate_instance(
                    instance, cache, None, routes
                )
            except ProviderError:
                record = None
            return classify_mt(instance, record, model, index, lexicon, mode)

    table = None
    if args.method == "unatt" or args.unatt_overlay:
        _require(args, ["train"], "the attestation heuristic")
        table = unatt.build_table(load_instances(args.train, require_labels=True))
        inputs["train"] = args.train
    if args.unatt_overlay:
        params["unatt-overlay"] = "yes"

    others = None
    if args.method == "combined":
        params["default-class"] = args.default_class
        if args.other_pred:
            others = _prediction_map(args.other_pred)
            inputs["other-pred"] = args.other_pred

    default = Label.parse(args.default_class)
    predictions = []
    for instance in dataset:
        if args.method == "mt-one":
            prediction = mt_predict(instance, Mode.ONE)
        elif args.method == "mt-all":
            prediction = mt_predict(instance, Mode.ALL)
        elif args.method == "unatt":
            prediction = unatt.classify_unatt(instance, table)
            if prediction is None:
                continue
        else:
            base = mt_predict(instance, Mode.ALL)
            if others is not None:
                other = others.get(instance.id)
                if other is None:
                    raise DataError(
                        f"{args.other_pred}: no prediction for instance {instance.id!r}"
                    )
                prediction = combine(base, other, default)
            else:
                prediction = combine(mt_predict(instance, Mode.ONE), base, default)
        if args.unatt_overlay:
            prediction = overlay_unatt(unatt.classify_unatt(instance, table), prediction)
        predictions.append(prediction)

    write_predictions(args.out, predictions, provenance=provenance_lines(inputs, params))
    print(f"{len(predictions)} predictions for {len(dataset)} instances -> {args.out}")
    return 0


def cmd_export_sequences(args: argparse.Namespace) -> int:
    dataset = load_instances(args.instances)
    variant = glossinput.Variant.parse(args.variant)
    inputs: dict[str, str] = {"instances": args.instances}
    params: dict[str, object] = {"variant": args.variant, "budget": args.budget}
    if variant is glossinput.Variant.BASELINE:
        records = glossinput.build_sequences(dataset, variant)
    else:
        _require(args, ["kb"], f"--variant {args.variant}")
        index = _load_index(args.kb)
        lexicon = _load_lexicon(args.lexicon)
        for position, path in enumerate(args.kb):
            inputs[f"kb{position}"] = path
        if args.lexicon:
            inputs["lexicon"] = args.lexicon
        records = glossinput.build_sequences(
            dataset, variant, index, lexicon, args.budget
        )
    glossinput.write_sequences(
        args.out, records, provenance=provenance_lines(inputs, params)
    )
    print(f"{len(records)} sequences ({args.variant}) -> {args.out}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    dataset = load_instances(args.gold, require_labels=True)
    predictions = read_predictions(args.pred)
    methods = sorted({p.method.value for p in predictions})
    report = evaluation.score(
        list(dataset),
        predictions,
        setting=args.setting,
        method=",".join(methods) if methods else "none",
    )
    sys.stdout.write(evaluation.render_reports([report]))
    evaluation.write_report_tsv(
        args.out,
        [report],
        provenance=provenance_lines(
            {"gold": args.gold, "pred": args.pred}, {"setting": args.setting}
        ),
    )
    return 0


# ---- Parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Idiomaticity classification toolkit: translation-based "
        "unsupervised methods, attestation heuristics, gloss-augmented "
        "sequence export, and macro-F1 scoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-kb", help="snapshot a knowledge base from TSV sources")
    p.add_argument("--name", required=True)
    p.add_argument("--synsets", required=True)
    p.add_argument("--glosses")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_kb)

    p = sub.add_parser("train-aligner", help="EM-train a word-alignment model")
    p.add_argument("--bitext", action="append", default=[])
    p.add_argument("--translations")
    p.add_argument("--instances")
    p.add_argument("--route", action="append", metavar="SRC=TGT")
    p.add_argument("--out", required=True)
    p.add_argument("--iters", type=int, default=aligner.DEFAULT_ITERATIONS)
    p.add_argument("--lambda", dest="tension", type=float, default=aligner.DEFAULT_TENSION)
    p.add_argument("--p0", type=float, default=aligner.DEFAULT_NULL_PROB)
    p.add_argument("--alpha", type=float, default=aligner.DEFAULT_ALPHA)
    p.set_defaults(func=cmd_train_aligner)

    p = sub.add_parser("translate", help="fill the translation cache for instances")
    p.add_argument("--instances", required=True)
    p.add_argument("--cache", required=True)
    p.add_argument("--provider", help="HTTP JSON endpoint URL")
    p.add_argument(
        "--credential-env",
        help="name of the environment variable holding the provider credential",
    )
    p.add_argument("--route", action="append", metavar="SRC=TGT")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("classify", help="predict idiomatic/literal per instance")
    p.add_argument(
        "--method", required=True, choices=["mt-one", "mt-all", "unatt", "combined"]
    )
    p.add_argument("--instances", required=True)
    p.add_argument("--train", help="labeled instances for the attestation table")
    p.add_argument("--model", help="trained aligner model")
    p.add_argument("--kb", action="append", default=[], help="KB snapshot (repeatable)")
    p.add_argument("--cache", help="translation cache")
    p.add_argument("--lexicon", help="morphological lexicon TSV")
    p.add_argument("--route", action="append", metavar="SRC=TGT")
    p.add_argument(
        "--default-class",
        default=Label.IDIOMATIC.value,
        choices=[label.value for label in Label],
        help="class returned when combined methods disagree",
    )
    p.add_argument(
        "--other-pred",
        help="predictions.tsv to combine with the translation method",
    )
    p.add_argument("--unatt-overlay", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser(
        "export-sequences", help="write classifier input sequences for instances"
    )
    p.add_argument(
        "--variant", required=True, choices=[v.value for v in glossinput.Variant]
    )
    p.add_argument("--instances", required=True)
    p.add_argument("--kb", action="append", default=[])
    p.add_argument("--lexicon")
    p.add_argument("--budget", type=int, default=glossinput.DEFAULT_TOKEN_BUDGET)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_sequences)

    p = sub.add_parser("evaluate", help="score predictions against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--setting", default="eval")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    return parser


def _fail(kind: str, exc: Exception) -> None:
    message = " ".join(str(exc).split())
    print(f"{PROG}: {kind} error: {message}", file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        _fail("usage", exc)
        return 2
    except ProviderError as exc:
        _fail("provider", exc)
        return 4
    except (DataError, IdiomtkError) as exc:
        _fail("data", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
