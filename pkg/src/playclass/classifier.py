"""Multinomial and Bernoulli Naive Bayes, trained and scored in log space.

Training uses Laplace smoothing with constant ``alpha`` (default 1): the
multinomial conditional is ``(T_ct + alpha) / (sum_t' T_ct' + alpha * V)``
where ``T_ct`` sums the row weights of feature ``t`` over class-``c``
documents (fractional when rows carry TF-IDF weights), and the Bernoulli
conditional is ``(N_ct + alpha) / (N_c + 2 * alpha)`` over per-document
presence counts. Scoring adds the class log-prior to the log-likelihood
and ranks classes by score, ties broken by label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from math import exp, fsum
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateFeaturesError
from .features import DocTermMatrix, Vocabulary, WeightMode

MODEL_FORMAT_VERSION = 1

SparseRow = Sequence[tuple[int, float]]


class Variant(str, Enum):
    MULTINOMIAL = "multinomial"
    BERNOULLI = "bernoulli"


@dataclass
class NBModel:
    variant: Variant
    classes: tuple[str, ...]
    log_prior: np.ndarray  # shape (C,)
    cond_log_prob: np.ndarray  # shape (C, V); log P(t|c)
    vocab_size: int
    alpha: float
    vocab: Vocabulary | None = None
    stops_name: str = ""
    stops_fingerprint: str = ""
    row_weighting: WeightMode | None = None
    _log_complement: np.ndarray | None = field(
        default=None, init=False, repr=False, compare=False
    )

    def log_complement(self) -> np.ndarray:
        """log(1 - P(t|c)), derived from cond_log_prob so that a reloaded
        model reproduces scores bit-exactly."""
        if self._log_complement is None:
            self._log_complement = np.log1p(-np.exp(self.cond_log_prob))
        return self._log_complement

    def validate(self) -> None:
        prior_sum = fsum(exp(lp) for lp in self.log_prior)
        if abs(prior_sum - 1.0) > 1e-9:
            raise AssertionError(f"class priors sum to {prior_sum}, not 1")
        if self.variant is Variant.MULTINOMIAL:
            row_sums = np.exp(self.cond_log_prob).sum(axis=1)
            if np.any(np.abs(row_sums - 1.0) > 1e-9):
                raise AssertionError("multinomial conditionals do not sum to 1 per class")
        else:
            probs = np.exp(self.cond_log_prob)
            if np.any(probs <= 0.0) or np.any(probs >= 1.0):
                raise AssertionError("bernoulli conditionals must lie strictly in (0, 1)")


@dataclass(frozen=True)
class Prediction:
    ranking: tuple[tuple[str, float], ...]

    @property
    def top(self) -> str:
        return self.ranking[0][0]

    def posteriors(self) -> dict[str, float]:
        """Normalized class probabilities via log-sum-exp."""
        scores = np.array([s for _, s in self.ranking])
        shifted = np.exp(scores - scores.max())
        norm = shifted / shifted.sum()
        return {label: float(p) for (label, _), p in zip(self.ranking, norm)}


def _check_training_input(matrix: DocTermMatrix, labels: Sequence[str], alpha: float) -> None:
    if len(matrix.rows) != len(labels):
        raise ValueError(f"{len(matrix.rows)} rows but {len(labels)} labels")
    if len(labels) < 1:
        raise ValueError("training requires at least one document")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if matrix.n_features < 1:
        raise DegenerateFeaturesError("cannot train on a zero-feature matrix")


def _class_weight_sums(
    matrix: DocTermMatrix, labels: Sequence[str], classes: tuple[str, ...]
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class document counts and per-class-per-feature weight sums."""
    class_index = {c: i for i, c in enumerate(classes)}
    n_docs = np.zeros(len(classes))
    totals = np.zeros((len(classes), matrix.n_features))
    for row, label in zip(matrix.rows, labels):
        ci = class_index[label]
        n_docs[ci] += 1
        if row:
            idx = np.fromiter((i for i, _ in row), dtype=np.intp, count=len(row))
            w = np.fromiter((w for _, w in row), dtype=np.float64, count=len(row))
            totals[ci, idx] += w
    return n_docs, totals


def train_multinomial(
    matrix: DocTermMatrix, labels: Sequence[str], alpha: float = 1.0
) -> NBModel:
    """Fit the multinomial variant; rows may carry TF-IDF or raw-count weights."""
    _check_training_input(matrix, labels, alpha)
    if matrix.mode is WeightMode.BINARY:
        raise ValueError("multinomial training expects tfidf or count rows, got binary")
    classes = tuple(sorted(set(labels)))
    n_docs, totals = _class_weight_sums(matrix, labels, classes)
    log_prior = np.log(n_docs / len(labels))
    denom = totals.sum(axis=1, keepdims=True) + alpha * matrix.n_features
    cond_log_prob = np.log((totals + alpha) / denom)
    model = NBModel(
        variant=Variant.MULTINOMIAL,
        classes=classes,
        log_prior=log_prior,
        cond_log_prob=cond_log_prob,
        vocab_size=matrix.n_features,
        alpha=alpha,
    )
    model.validate()
    return model


def train_bernoulli(matrix: DocTermMatrix, labels: Sequence[str], alpha: float = 1.0) -> NBModel:
    """Fit the Bernoulli variant over per-document presence indicators."""
    _check_training_input(matrix, labels, alpha)
    if matrix.mode is not WeightMode.BINARY:
        raise ValueError(f"bernoulli training expects binary rows, got {matrix.mode.value}")
    classes = tuple(sorted(set(labels)))
    n_docs, presence = _class_weight_sums(matrix, labels, classes)
    log_prior = np.log(n_docs / len(labels))
    prob = (presence + alpha) / (n_docs[:, None] + 2.0 * alpha)
    model = NBModel(
        variant=Variant.BERNOULLI,
        classes=classes,
        log_prior=log_prior,
        cond_log_prob=np.log(prob),
        vocab_size=matrix.n_features,
        alpha=alpha,
    )
    model.validate()
    return model


def _scores(model: NBModel, row: SparseRow) -> np.ndarray:
    if row:
        idx = np.fromiter((i for i, _ in row), dtype=np.intp, count=len(row))
        if idx.min() < 0 or idx.max() >= model.vocab_size:
            raise ValueError(f"row index outside 0..{model.vocab_size - 1}")
    else:
        idx = np.empty(0, dtype=np.intp)
    if model.variant is Variant.MULTINOMIAL:
        w = np.fromiter((w for _, w in row), dtype=np.float64, count=len(row))
        return model.log_prior + model.cond_log_prob[:, idx] @ w
    # Bernoulli: start from the all-absent likelihood, then correct each
    # present token; equal to summing presence/absence terms over the whole
    # vocabulary but O(row) per document.
    comp = model.log_complement()
    scores = model.log_prior + comp.sum(axis=1)
    if len(idx):
        scores = scores + (model.cond_log_prob[:, idx] - comp[:, idx]).sum(axis=1)
    return scores


def predict(model: NBModel, row: SparseRow) -> Prediction:
    """Rank all classes by joint log score, highest first, ties by label."""
    scores = _scores(model, row)
    order = sorted(zip(model.classes, scores), key=lambda cs: (-cs[1], cs[0]))
    return Prediction(ranking=tuple((c, float(s)) for c, s in order))


def predict_batch(model: NBModel, matrix: DocTermMatrix) -> list[Prediction]:
    if matrix.n_features != model.vocab_size:
        raise ValueError(
            f"matrix has {matrix.n_features} features, model expects {model.vocab_size}"
        )
    if model.variant is Variant.BERNOULLI and matrix.mode is not WeightMode.BINARY:
        raise ValueError("bernoulli models require binary rows")
    if model.variant is Variant.MULTINOMIAL and matrix.mode is WeightMode.BINARY:
        raise ValueError("multinomial models require tfidf or count rows")
    return [predict(model, row) for row in matrix.rows]


def save_model(model: NBModel, path: str | Path) -> None:
    """Write the model as JSON; floats use shortest round-trip form so a
    reload reproduces every score bit-exactly."""
    if model.vocab is None:
        raise ValueError("model has no vocabulary attached; cannot serialize")
    row_weighting = model.row_weighting
    if row_weighting is None:
        row_weighting = (
            WeightMode.BINARY if model.variant is Variant.BERNOULLI else WeightMode.TFIDF
        )
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "variant": model.variant.value,
        "alpha": model.alpha,
        "classes": list(model.classes),
        "log_prior": model.log_prior.tolist(),
        "row_weighting": row_weighting.value,
        "vocabulary": {
            "tokens": list(model.vocab.tokens),
            "document_frequency": list(model.vocab.document_frequency),
            "n_documents": model.vocab.n_documents,
            "stop_source": model.stops_name,
            "stop_fingerprint": model.stops_fingerprint,
        },
        "cond_log_prob": model.cond_log_prob.tolist(),
    }
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def load_model(path: str | Path) -> NBModel:
    with Path(path).open(encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {version}")
    vocab_block = payload["vocabulary"]
    vocab = Vocabulary(
        tokens=tuple(vocab_block["tokens"]),
        document_frequency=tuple(vocab_block["document_frequency"]),
        n_documents=vocab_block["n_documents"],
    )
    model = NBModel(
        variant=Variant(payload["variant"]),
        classes=tuple(payload["classes"]),
        log_prior=np.array(payload["log_prior"], dtype=np.float64),
        cond_log_prob=np.array(payload["cond_log_prob"], dtype=np.float64),
        vocab_size=len(vocab),
        alpha=payload["alpha"],
        vocab=vocab,
        stops_name=vocab_block.get("stop_source", ""),
        stops_fingerprint=vocab_block.get("stop_fingerprint", ""),
        row_weighting=WeightMode(payload["row_weighting"]),
    )
    model.validate()
    return model
