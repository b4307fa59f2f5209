"""Command-line surface: ingest raw metadata, train, predict, evaluate.

Every run is deterministic given its flags and input bytes; the only
randomness is the split seed, which is printed in each report header.
Exit codes: 0 success, 1 data or contract error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from . import corpus as corpus_mod
from . import evaluation as eval_mod
from .classifier import (
    NBModel,
    Variant,
    load_model,
    predict_batch,
    save_model,
    train_bernoulli,
    train_multinomial,
)
from .corpus import (
    AppFilter,
    CategoryScope,
    DEFAULT_DROPPED_CATEGORIES,
    FilterProfile,
    apply_filter_profile,
    compose_document,
    filter_top_developers,
    read_corpus_file,
    write_corpus_file,
)
from .errors import PlayclassError
from .features import (
    DEFAULT_MAX_DF,
    DEFAULT_MIN_DF,
    WeightMode,
    build_vocabulary,
    vectorize,
    vectorize_texts,
)
from .textproc import StopWordList, default_stop_words, load_stop_words

SEED_ENV_VAR = "PLAYCLASS_SEED"


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    model: Path | None = None
    profile: AppFilter = AppFilter.ALL_APPS
    scope: CategoryScope = CategoryScope.ALL_CATEGORIES
    min_desc_words: int = 100
    drop_categories: frozenset[str] = DEFAULT_DROPPED_CATEGORIES
    variant: Variant = Variant.MULTINOMIAL
    alpha: float = 1.0
    min_df: float = DEFAULT_MIN_DF
    max_df: float = DEFAULT_MAX_DF
    weighting: WeightMode = WeightMode.TFIDF
    eval_kind: str = "holdout"
    k: int = 10
    test_fraction: float = 0.2
    step_fraction: float = 0.2
    n_iterations: int = 5
    seed: int = 0
    top_k: int = 3
    stop_words: Path | None = None


def _resolve_stops(config: RunConfig) -> StopWordList:
    if config.stop_words is not None:
        return load_stop_words(config.stop_words)
    return default_stop_words()


def cmd_ingest(config: RunConfig) -> int:
    records, stats = corpus_mod.ingest_csv(config.input)
    top = filter_top_developers(records)
    profile = FilterProfile(
        app_filter=config.profile,
        category_scope=config.scope,
        min_description_words=config.min_desc_words,
        dropped_categories=config.drop_categories,
    )
    built = apply_filter_profile(top, profile)
    write_corpus_file(built, config.output)
    per_category = Counter(built.labels)
    print(f"rows read:           {stats.rows_read}")
    print(f"rows skipped:        {stats.rows_skipped}")
    for reason in sorted(stats.skipped):
        print(f"  {reason}: {stats.skipped[reason]}")
    print(f"top-developer apps:  {len(top)}")
    print(f"apps retained:       {len(built)}")
    print(f"categories:          {len(built.categories)}")
    print("category\tapps")
    for label in sorted(per_category):
        print(f"{label}\t{per_category[label]}")
    print(f"corpus written to {config.output}")
    return 0


def cmd_train(config: RunConfig) -> int:
    built = read_corpus_file(config.input)
    stops = _resolve_stops(config)
    vocab = build_vocabulary(built, config.min_df, config.max_df, stops)
    row_mode = WeightMode.BINARY if config.variant is Variant.BERNOULLI else config.weighting
    matrix = vectorize(built, vocab, row_mode, stops)
    train = train_bernoulli if config.variant is Variant.BERNOULLI else train_multinomial
    model = train(matrix, built.labels, config.alpha)
    model.vocab = vocab
    model.stops_name = stops.source_name
    model.stops_fingerprint = stops.fingerprint()
    model.row_weighting = row_mode
    save_model(model, config.output)
    print(f"variant:     {model.variant.value}")
    print(f"classes:     {len(model.classes)}")
    print(f"vocabulary:  {model.vocab_size} tokens")
    print("class\tprior")
    for label, lp in zip(model.classes, model.log_prior):
        print(f"{label}\t{math.exp(lp):.6f}")
    print(f"model written to {config.output}")
    return 0


def _predict_inputs(config: RunConfig) -> list[str]:
    path = Path(config.input)
    if path.suffix.lower() == ".csv":
        records = corpus_mod.load_raw_csv(path)
        return [compose_document(r) for r in records]
    lines = path.read_text("utf-8").splitlines()
    return [line for line in lines if line.strip()]


def _check_tokenizer_match(model: NBModel, stops: StopWordList) -> None:
    if model.stops_fingerprint and model.stops_fingerprint != stops.fingerprint():
        raise ValueError(
            f"stop-word list {stops.source_name!r} does not match the list the model "
            f"was trained with ({model.stops_name!r}); pass the original via --stop-words"
        )


def cmd_predict(config: RunConfig) -> int:
    model = load_model(config.model)
    stops = _resolve_stops(config)
    _check_tokenizer_match(model, stops)
    texts = _predict_inputs(config)
    matrix = vectorize_texts(texts, model.vocab, model.row_weighting, stops)
    predictions = predict_batch(model, matrix)
    out = sys.stdout if config.output is None else Path(config.output).open(
        "w", encoding="utf-8", newline="\n"
    )
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["input_id", "rank", "label", "log_score", "posterior"])
        for i, pred in enumerate(predictions):
            posteriors = pred.posteriors()
            for rank, (label, score) in enumerate(pred.ranking[: config.top_k], start=1):
                writer.writerow([i, rank, label, repr(score), repr(posteriors[label])])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_evaluate(config: RunConfig) -> int:
    built = read_corpus_file(config.input)
    stops = _resolve_stops(config)
    pipeline = eval_mod.PipelineConfig(
        variant=config.variant,
        alpha=config.alpha,
        min_df=config.min_df,
        max_df=config.max_df,
        weighting=config.weighting,
        stops=stops,
    )
    outdir = Path(config.output) if config.output is not None else Path(".")
    outdir.mkdir(parents=True, exist_ok=True)
    seed = config.seed
    print(f"seed: {seed}")

    if config.eval_kind == "holdout":
        plan = eval_mod.SplitPlan(
            kind=eval_mod.SplitKind.HOLD_OUT, test_fraction=config.test_fraction, seed=seed
        )
        result = eval_mod.evaluate_holdout(built, pipeline, plan)
        eval_mod.write_confusion_csv(result.matrix, outdir / "confusion.csv", seed=seed)
        eval_mod.write_report_csv(result.report, outdir / "report.csv", seed=seed)
        print(f"accuracy: {result.accuracy:.6f}")
    elif config.eval_kind == "kfold":
        plan = eval_mod.SplitPlan(kind=eval_mod.SplitKind.K_FOLD, k=config.k, seed=seed)
        result = eval_mod.cross_validate(built, pipeline, plan)
        eval_mod.write_fold_scores_csv(result, outdir / f"kfold_{config.k}.csv", seed=seed)
        print(f"{config.k}-fold mean accuracy: {result.mean_score:.6f}")
    elif config.eval_kind == "rfe":
        plan = eval_mod.SplitPlan(
            kind=eval_mod.SplitKind.STRATIFIED_K_FOLD, k=config.k, seed=seed
        )
        points = eval_mod.rfe_cv(built, pipeline, plan, config.step_fraction)
        eval_mod.write_curve_csv(points, outdir / "rfe_curve.csv", seed=seed)
        best = max(points, key=lambda p: (p.mean_score, -p.x))
        print(f"best mean accuracy: {best.mean_score:.6f} at {best.x} features")
    elif config.eval_kind == "curve":
        plan = eval_mod.SplitPlan(
            kind=eval_mod.SplitKind.SHUFFLE_SPLIT,
            test_fraction=config.test_fraction,
            n_iterations=config.n_iterations,
            seed=seed,
        )
        train_curve, test_curve = eval_mod.learning_curve(built, pipeline, plan)
        eval_mod.write_curve_csv(train_curve, outdir / "learning_curve_train.csv", seed=seed)
        eval_mod.write_curve_csv(test_curve, outdir / "learning_curve_test.csv", seed=seed)
        if test_curve:
            print(f"test accuracy at full size: {test_curve[-1].mean_score:.6f}")
    else:  # pragma: no cover - argparse choices guard this
        raise ValueError(f"unknown evaluation kind: {config.eval_kind}")
    return 0


def _add_common_feature_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--variant", choices=["multinomial", "bernoulli"], default="multinomial")
    sub.add_argument("--alpha", type=float, default=1.0, help="Laplace smoothing constant")
    sub.add_argument("--min-df", type=float, default=DEFAULT_MIN_DF)
    sub.add_argument("--max-df", type=float, default=DEFAULT_MAX_DF)
    sub.add_argument(
        "--weighting",
        choices=["tfidf", "count"],
        default="tfidf",
        help="row weights for multinomial training",
    )
    sub.add_argument("--stop-words", type=Path, default=None, help="custom stop-word file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="playclass",
        description="App-store metadata categorization with Naive Bayes.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="raw CSV -> canonical corpus file")
    ingest.add_argument("--input", type=Path, required=True, help="raw metadata CSV")
    ingest.add_argument("--output", type=Path, required=True, help="corpus file to write")
    ingest.add_argument("--profile", choices=["all", "filtered"], default="all")
    ingest.add_argument(
        "--scope", choices=["all", "games", "grouped", "other"], default="all"
    )
    ingest.add_argument("--min-desc-words", type=int, default=100)
    ingest.add_argument(
        "--drop-category",
        action="append",
        default=None,
        metavar="LABEL",
        help="category to drop under --profile filtered (repeatable)",
    )

    train = commands.add_parser("train", help="corpus file -> model file")
    train.add_argument("--input", type=Path, required=True, help="corpus file")
    train.add_argument("--output", type=Path, required=True, help="model file to write")
    _add_common_feature_flags(train)

    pred = commands.add_parser("predict", help="rank categories for new apps")
    pred.add_argument("--model", type=Path, required=True, help="trained model file")
    pred.add_argument(
        "--input",
        type=Path,
        required=True,
        help="app CSV (with the ingest schema) or plain text, one document per line",
    )
    pred.add_argument("--output", type=Path, default=None, help="CSV to write (default stdout)")
    pred.add_argument("--top-k", type=int, default=3)
    pred.add_argument("--stop-words", type=Path, default=None)

    ev = commands.add_parser("evaluate", help="run one evaluation on a corpus file")
    ev.add_argument("--input", type=Path, required=True, help="corpus file")
    ev.add_argument("--output", type=Path, default=None, help="report directory (default .)")
    ev.add_argument("--eval", choices=["holdout", "kfold", "rfe", "curve"], default="holdout")
    ev.add_argument("--k", type=int, default=10)
    ev.add_argument("--test-fraction", type=float, default=0.2)
    ev.add_argument("--step-fraction", type=float, default=0.2)
    ev.add_argument("--iterations", type=int, default=5, help="shuffle-split iterations")
    ev.add_argument("--seed", type=int, default=None, help=f"fallback: ${SEED_ENV_VAR}, then 0")
    _add_common_feature_flags(ev)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = int(os.environ.get(SEED_ENV_VAR, "0"))
    drop = getattr(args, "drop_category", None)
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        output=getattr(args, "output", None),
        model=getattr(args, "model", None),
        profile=AppFilter(getattr(args, "profile", "all")),
        scope=CategoryScope(getattr(args, "scope", "all")),
        min_desc_words=getattr(args, "min_desc_words", 100),
        drop_categories=DEFAULT_DROPPED_CATEGORIES if drop is None else frozenset(drop),
        variant=Variant(getattr(args, "variant", "multinomial")),
        alpha=getattr(args, "alpha", 1.0),
        min_df=getattr(args, "min_df", DEFAULT_MIN_DF),
        max_df=getattr(args, "max_df", DEFAULT_MAX_DF),
        weighting=WeightMode(getattr(args, "weighting", "tfidf")),
        eval_kind=getattr(args, "eval", "holdout"),
        k=getattr(args, "k", 10),
        test_fraction=getattr(args, "test_fraction", 0.2),
        step_fraction=getattr(args, "step_fraction", 0.2),
        n_iterations=getattr(args, "iterations", 5),
        seed=seed,
        top_k=getattr(args, "top_k", 3),
        stop_words=getattr(args, "stop_words", None),
    )


_COMMANDS = {
    "ingest": cmd_ingest,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = _config_from_args(args)
    try:
        return _COMMANDS[config.command](config)
    except PlayclassError as exc:
        print(f"ERROR[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"ERROR[io]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ERROR[io]: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"ERROR[contract]: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
