"""Model evaluation: deterministic splits, cross-validation, recursive
feature elimination, learning curves, confusion matrices, and per-class
metric reports.

Every split is fully determined by its plan's seed. Vocabularies are
always refit on the training side of a split and applied unchanged to the
test side, so document-frequency statistics never leak from held-out data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .classifier import (
    NBModel,
    Variant,
    predict_batch,
    train_bernoulli,
    train_multinomial,
)
from .corpus import Corpus
from .errors import StratificationError
from .features import (
    DEFAULT_MAX_DF,
    DEFAULT_MIN_DF,
    Vocabulary,
    WeightMode,
    _build_vocabulary_from_tokens,
    _vectorize_tokens,
    tokenize_corpus,
)
from .textproc import StopWordList

log = logging.getLogger(__name__)


class SplitKind(str, Enum):
    HOLD_OUT = "holdout"
    K_FOLD = "kfold"
    STRATIFIED_K_FOLD = "stratified-kfold"
    SHUFFLE_SPLIT = "shuffle-split"


_FOLDED_KINDS = (SplitKind.K_FOLD, SplitKind.STRATIFIED_K_FOLD)


@dataclass(frozen=True)
class SplitPlan:
    kind: SplitKind
    test_fraction: float = 0.2
    k: int = 10
    n_iterations: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.n_iterations < 1:
            raise ValueError(f"n_iterations must be >= 1, got {self.n_iterations}")


@dataclass(frozen=True)
class PipelineConfig:
    """Everything needed to fit one vocabulary + model on a document set."""

    variant: Variant = Variant.MULTINOMIAL
    alpha: float = 1.0
    min_df: float = DEFAULT_MIN_DF
    max_df: float = DEFAULT_MAX_DF
    weighting: WeightMode = WeightMode.TFIDF
    stops: StopWordList | None = None

    def __post_init__(self) -> None:
        if self.weighting is WeightMode.BINARY:
            raise ValueError("weighting applies to multinomial rows; use variant=bernoulli")

    @property
    def row_mode(self) -> WeightMode:
        return WeightMode.BINARY if self.variant is Variant.BERNOULLI else self.weighting


@dataclass(frozen=True)
class CVResult:
    mean_score: float
    fold_scores: tuple[float, ...]


@dataclass(frozen=True)
class CurvePoint:
    x: int
    mean_score: float
    lo: float
    hi: float


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: np.ndarray  # counts[i][j]: true class i predicted as class j

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def support(self, label: str) -> int:
        return int(self.counts[self.labels.index(label)].sum())


@dataclass(frozen=True)
class ClassStats:
    tp: int
    tn: int
    fp: int
    fn: int
    tpr: float
    fnr: float
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassReport:
    labels: tuple[str, ...]
    per_class: dict[str, ClassStats]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    total: int


def make_splits(
    n: int, labels: Sequence[str], plan: SplitPlan
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Generate (train_indices, test_indices) pairs for the plan.

    K-fold kinds shuffle once and cut contiguous folds whose sizes differ
    by at most one; the stratified kind additionally keeps every class's
    per-fold count within one document of an even share. Hold-out and
    shuffle-split return train indices in shuffled order so callers can
    take seeded prefixes.
    """
    if n < 1:
        raise ValueError("cannot split an empty index range")
    if len(labels) != n:
        raise ValueError(f"got {len(labels)} labels for {n} documents")
    rng = np.random.default_rng(plan.seed)

    if plan.kind in (SplitKind.HOLD_OUT, SplitKind.SHUFFLE_SPLIT):
        n_test = int(n * plan.test_fraction)
        if n_test < 1 or n_test >= n:
            raise ValueError(
                f"test_fraction={plan.test_fraction} yields an empty train or test set for n={n}"
            )
        iterations = 1 if plan.kind is SplitKind.HOLD_OUT else plan.n_iterations
        splits = []
        for _ in range(iterations):
            perm = rng.permutation(n)
            splits.append((perm[n_test:], perm[:n_test]))
        return splits

    if n < plan.k:
        raise ValueError(f"cannot make {plan.k} folds from {n} documents")

    if plan.kind is SplitKind.K_FOLD:
        perm = rng.permutation(n)
        fold_sizes = [n // plan.k + (1 if i < n % plan.k else 0) for i in range(plan.k)]
        folds = []
        start = 0
        for size in fold_sizes:
            folds.append(np.sort(perm[start : start + size]))
            start += size
    else:  # stratified
        by_class: dict[str, list[int]] = {}
        for i, label in enumerate(labels):
            by_class.setdefault(label, []).append(i)
        for label, members in sorted(by_class.items()):
            if len(members) < plan.k:
                raise StratificationError(
                    f"class {label} has {len(members)} members, fewer than k={plan.k}"
                )
        fold_members: list[list[int]] = [[] for _ in range(plan.k)]
        fold_loads = [0] * plan.k
        for label in sorted(by_class):
            members = rng.permutation(np.array(by_class[label], dtype=np.intp))
            base, extra = divmod(len(members), plan.k)
            counts = [base] * plan.k
            # hand the remainder to the currently lightest folds so overall
            # fold sizes stay within one of each other
            for f in sorted(range(plan.k), key=lambda f: (fold_loads[f], f))[:extra]:
                counts[f] += 1
            pos = 0
            for f in range(plan.k):
                fold_members[f].extend(members[pos : pos + counts[f]].tolist())
                fold_loads[f] += counts[f]
                pos += counts[f]
        folds = [np.sort(np.array(m, dtype=np.intp)) for m in fold_members]

    all_indices = np.arange(n)
    splits = []
    for f, test in enumerate(folds):
        mask = np.ones(n, dtype=bool)
        mask[test] = False
        splits.append((all_indices[mask], test))
    return splits


def _fit(
    token_docs: Sequence[Sequence[str]],
    labels: Sequence[str],
    train_idx: Sequence[int],
    config: PipelineConfig,
    restrict_tokens: set[str] | None = None,
    relax_df: bool = False,
) -> tuple[Vocabulary, NBModel]:
    train_tokens = [token_docs[i] for i in train_idx]
    if relax_df:
        vocab = _build_vocabulary_from_tokens(train_tokens, 0.0, 1.0, restrict_tokens)
    else:
        vocab = _build_vocabulary_from_tokens(
            train_tokens, config.min_df, config.max_df, restrict_tokens
        )
    matrix = _vectorize_tokens(train_tokens, vocab, config.row_mode)
    train = train_bernoulli if config.variant is Variant.BERNOULLI else train_multinomial
    model = train(matrix, [labels[i] for i in train_idx], config.alpha)
    return vocab, model


def _accuracy(
    token_docs: Sequence[Sequence[str]],
    labels: Sequence[str],
    idx: Sequence[int],
    vocab: Vocabulary,
    model: NBModel,
    config: PipelineConfig,
) -> float:
    matrix = _vectorize_tokens([token_docs[i] for i in idx], vocab, config.row_mode)
    predictions = predict_batch(model, matrix)
    hits = sum(p.top == labels[i] for p, i in zip(predictions, idx))
    return hits / len(predictions)


def cross_validate(corpus: Corpus, config: PipelineConfig, plan: SplitPlan) -> CVResult:
    """Mean accuracy over folds, refitting vocabulary and model per fold."""
    if plan.kind not in _FOLDED_KINDS:
        raise ValueError(f"cross_validate needs a folded split kind, got {plan.kind.value}")
    token_docs = tokenize_corpus(corpus, config.stops)
    labels = corpus.labels
    scores = []
    for train_idx, test_idx in make_splits(len(corpus), labels, plan):
        vocab, model = _fit(token_docs, labels, train_idx, config)
        scores.append(_accuracy(token_docs, labels, test_idx, vocab, model, config))
    return CVResult(mean_score=sum(scores) / len(scores), fold_scores=tuple(scores))


def rfe_cv(
    corpus: Corpus,
    config: PipelineConfig,
    plan: SplitPlan,
    step_fraction: float = 0.2,
) -> list[CurvePoint]:
    """Recursive feature elimination with cross-validated scoring.

    Each iteration scores the active token set by CV, ranks tokens by the
    squared class-conditional log-probabilities summed over classes (from a
    model fit on the whole corpus), then drops the lowest
    ``ceil(step_fraction * current)`` of them, stopping at one token. Fold
    vocabularies keep every active token seen in the fold's training side;
    df-ratio pruning only shapes the initial set.
    """
    if not 0.0 < step_fraction < 1.0:
        raise ValueError(f"step_fraction must be in (0, 1), got {step_fraction}")
    if plan.kind not in _FOLDED_KINDS:
        raise ValueError(f"rfe_cv needs a folded split kind, got {plan.kind.value}")
    token_docs = tokenize_corpus(corpus, config.stops)
    labels = corpus.labels
    full_vocab = _build_vocabulary_from_tokens(token_docs, config.min_df, config.max_df)
    active: list[str] = list(full_vocab.tokens)
    all_idx = range(len(corpus))
    points: list[CurvePoint] = []
    while True:
        active_set = set(active)
        scores = []
        for train_idx, test_idx in make_splits(len(corpus), labels, plan):
            vocab, model = _fit(
                token_docs, labels, train_idx, config, restrict_tokens=active_set, relax_df=True
            )
            scores.append(_accuracy(token_docs, labels, test_idx, vocab, model, config))
        points.append(
            CurvePoint(
                x=len(active),
                mean_score=sum(scores) / len(scores),
                lo=min(scores),
                hi=max(scores),
            )
        )
        if len(active) <= 1:
            return points
        rank_vocab, rank_model = _fit(
            token_docs, labels, all_idx, config, restrict_tokens=active_set, relax_df=True
        )
        importance = (rank_model.cond_log_prob**2).sum(axis=0)
        by_importance = {tok: importance[i] for i, tok in enumerate(rank_vocab.tokens)}
        n_drop = min(max(1, math.ceil(step_fraction * len(active))), len(active) - 1)
        doomed = set(
            sorted(active, key=lambda tok: (by_importance.get(tok, 0.0), tok))[:n_drop]
        )
        active = [tok for tok in active if tok not in doomed]


def learning_curve(
    corpus: Corpus,
    config: PipelineConfig,
    plan: SplitPlan,
    train_sizes: Sequence[float] | None = None,
) -> tuple[list[CurvePoint], list[CurvePoint]]:
    """Accuracy on the training subset and the held-out set as the training
    prefix grows, averaged over shuffle-split iterations.

    Returns (train_curve, test_curve). A size is skipped with a warning if
    any iteration's training prefix misses one of the corpus's classes.
    """
    if plan.kind is not SplitKind.SHUFFLE_SPLIT:
        raise ValueError(f"learning_curve needs a shuffle-split plan, got {plan.kind.value}")
    if train_sizes is None:
        train_sizes = tuple((i + 1) / 10 for i in range(10))
    sizes = list(train_sizes)
    if any(not 0.0 < s <= 1.0 for s in sizes) or sizes != sorted(sizes):
        raise ValueError("train_sizes must be ascending fractions in (0, 1]")
    token_docs = tokenize_corpus(corpus, config.stops)
    labels = corpus.labels
    classes = corpus.categories
    splits = make_splits(len(corpus), labels, plan)
    train_points: list[CurvePoint] = []
    test_points: list[CurvePoint] = []
    for frac in sizes:
        pool_size = len(splits[0][0])
        size = int(frac * pool_size)
        if size < 1:
            log.warning("learning_curve: skipping fraction %.3f (empty training subset)", frac)
            continue
        prefixes = [train_idx[:size] for train_idx, _ in splits]
        if any({labels[i] for i in prefix} != classes for prefix in prefixes):
            log.warning(
                "learning_curve: skipping size %d (a training subset misses a class)", size
            )
            continue
        train_scores = []
        test_scores = []
        for prefix, (_, test_idx) in zip(prefixes, splits):
            vocab, model = _fit(token_docs, labels, prefix, config)
            train_scores.append(_accuracy(token_docs, labels, prefix, vocab, model, config))
            test_scores.append(_accuracy(token_docs, labels, test_idx, vocab, model, config))
        train_points.append(
            CurvePoint(
                x=size,
                mean_score=sum(train_scores) / len(train_scores),
                lo=min(train_scores),
                hi=max(train_scores),
            )
        )
        test_points.append(
            CurvePoint(
                x=size,
                mean_score=sum(test_scores) / len(test_scores),
                lo=min(test_scores),
                hi=max(test_scores),
            )
        )
    return train_points, test_points


def confusion(
    y_true: Sequence[str], y_pred: Sequence[str], labels: Sequence[str]
) -> ConfusionMatrix:
    """Count matrix over the sorted label list; rows are true classes."""
    if len(y_true) != len(y_pred):
        raise ValueError(f"{len(y_true)} true labels vs {len(y_pred)} predictions")
    ordered = tuple(sorted(set(labels)))
    index = {label: i for i, label in enumerate(ordered)}
    counts = np.zeros((len(ordered), len(ordered)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        if t not in index:
            raise ValueError(f"unknown label in y_true: {t!r}")
        if p not in index:
            raise ValueError(f"unknown label in y_pred: {p!r}")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(labels=ordered, counts=counts)


def class_report(cm: ConfusionMatrix) -> ClassReport:
    """Per-class TP/TN/FP/FN with ratio metrics; zero denominators yield 0."""
    total = cm.total
    per_class: dict[str, ClassStats] = {}
    for i, label in enumerate(cm.labels):
        tp = int(cm.counts[i, i])
        fp = int(cm.counts[:, i].sum()) - tp
        fn = int(cm.counts[i, :].sum()) - tp
        tn = total - tp - fp - fn
        support = tp + fn
        tpr = tp / support if support else 0.0
        fnr = 1.0 - tpr
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tpr
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassStats(
            tp=tp, tn=tn, fp=fp, fn=fn,
            tpr=tpr, fnr=fnr, precision=precision, recall=recall, f1=f1,
            support=support,
        )
    k = len(cm.labels)
    accuracy = float(np.trace(cm.counts)) / total if total else 0.0
    return ClassReport(
        labels=cm.labels,
        per_class=per_class,
        accuracy=accuracy,
        macro_precision=sum(s.precision for s in per_class.values()) / k,
        macro_recall=sum(s.recall for s in per_class.values()) / k,
        macro_f1=sum(s.f1 for s in per_class.values()) / k,
        total=total,
    )


@dataclass(frozen=True)
class HoldOutResult:
    accuracy: float
    matrix: ConfusionMatrix
    report: ClassReport


def evaluate_holdout(corpus: Corpus, config: PipelineConfig, plan: SplitPlan) -> HoldOutResult:
    """Single train/test split, full confusion matrix and class report."""
    if plan.kind is not SplitKind.HOLD_OUT:
        raise ValueError(f"evaluate_holdout needs a holdout plan, got {plan.kind.value}")
    token_docs = tokenize_corpus(corpus, config.stops)
    labels = corpus.labels
    ((train_idx, test_idx),) = make_splits(len(corpus), labels, plan)
    vocab, model = _fit(token_docs, labels, train_idx, config)
    matrix = _vectorize_tokens([token_docs[i] for i in test_idx], vocab, config.row_mode)
    predictions = predict_batch(model, matrix)
    y_true = [labels[i] for i in test_idx]
    y_pred = [p.top for p in predictions]
    cm = confusion(y_true, y_pred, sorted(corpus.categories))
    report = class_report(cm)
    return HoldOutResult(accuracy=report.accuracy, matrix=cm, report=report)


def _header(fh, seed: int | None) -> None:
    if seed is not None:
        fh.write(f"# seed={seed}\n")


def write_confusion_csv(cm: ConfusionMatrix, path: str | Path, seed: int | None = None) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        _header(fh, seed)
        fh.write("label," + ",".join(cm.labels) + "\n")
        for label, row in zip(cm.labels, cm.counts):
            fh.write(label + "," + ",".join(str(int(c)) for c in row) + "\n")


def write_report_csv(report: ClassReport, path: str | Path, seed: int | None = None) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        _header(fh, seed)
        fh.write("category,TP,TN,FP,FN,TPR,FNR,precision,recall,f1-score,support\n")
        for label in report.labels:
            s = report.per_class[label]
            fh.write(
                f"{label},{s.tp},{s.tn},{s.fp},{s.fn},{s.tpr!r},{s.fnr!r},"
                f"{s.precision!r},{s.recall!r},{s.f1!r},{s.support}\n"
            )
        fh.write(f"# accuracy={report.accuracy!r}\n")
        fh.write(
            f"# macro_precision={report.macro_precision!r}"
            f" macro_recall={report.macro_recall!r} macro_f1={report.macro_f1!r}\n"
        )


def write_curve_csv(points: Sequence[CurvePoint], path: str | Path, seed: int | None = None) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        _header(fh, seed)
        fh.write("x,mean,lo,hi\n")
        for p in points:
            fh.write(f"{p.x},{p.mean_score!r},{p.lo!r},{p.hi!r}\n")


def write_fold_scores_csv(result: CVResult, path: str | Path, seed: int | None = None) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        _header(fh, seed)
        fh.write("fold,score\n")
        for i, score in enumerate(result.fold_scores):
            fh.write(f"{i},{score!r}\n")
        fh.write(f"# mean={result.mean_score!r}\n")
