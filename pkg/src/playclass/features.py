"""Vocabulary construction with document-frequency pruning and sparse
document vectors.

TF-IDF weights follow ``tf * ln(n_documents / df)`` with no smoothing or
offset; both boundaries of the df-ratio window are inclusive. Feature
indices are assigned in lexicographic token order so vectorization is
deterministic.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import DegenerateFeaturesError
from .textproc import StopWordList, tokenize

DEFAULT_MIN_DF = 0.0005
DEFAULT_MAX_DF = 0.70


class WeightMode(str, Enum):
    TFIDF = "tfidf"
    COUNT = "count"
    BINARY = "binary"


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]  # index order == sorted token order
    document_frequency: tuple[int, ...]
    n_documents: int

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.document_frequency):
            raise ValueError("tokens and document_frequency lengths differ")
        for df in self.document_frequency:
            if not 1 <= df <= self.n_documents:
                raise ValueError(f"document frequency {df} outside 1..{self.n_documents}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def token_to_index(self) -> dict[str, int]:
        return {tok: i for i, tok in enumerate(self.tokens)}

    def content_id(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.n_documents).encode())
        for tok, df in zip(self.tokens, self.document_frequency):
            h.update(f"\n{tok}\t{df}".encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class DocTermMatrix:
    rows: tuple[tuple[tuple[int, float], ...], ...]
    mode: WeightMode
    vocab_id: str
    n_features: int

    def __len__(self) -> int:
        return len(self.rows)


def tokenize_corpus(corpus: Corpus, stops: StopWordList | None = None) -> list[list[str]]:
    return [tokenize(doc.text, stops) for doc in corpus.documents]


def _document_frequencies(token_docs: Sequence[Sequence[str]]) -> Counter:
    df: Counter = Counter()
    for tokens in token_docs:
        df.update(set(tokens))
    return df


def _build_vocabulary_from_tokens(
    token_docs: Sequence[Sequence[str]],
    min_df: float,
    max_df: float,
    restrict_tokens: Iterable[str] | None = None,
) -> Vocabulary:
    if not 0 <= min_df < max_df <= 1:
        raise ValueError(f"need 0 <= min_df < max_df <= 1, got {min_df}, {max_df}")
    n = len(token_docs)
    if n == 0:
        raise DegenerateFeaturesError("cannot build a vocabulary from an empty corpus")
    df = _document_frequencies(token_docs)
    allowed = None if restrict_tokens is None else set(restrict_tokens)
    kept = sorted(
        tok
        for tok, count in df.items()
        if min_df <= count / n <= max_df and (allowed is None or tok in allowed)
    )
    if not kept:
        raise DegenerateFeaturesError(
            f"vocabulary is empty after df pruning (min_df={min_df}, max_df={max_df})"
        )
    return Vocabulary(
        tokens=tuple(kept),
        document_frequency=tuple(df[tok] for tok in kept),
        n_documents=n,
    )


def build_vocabulary(
    corpus: Corpus,
    min_df: float = DEFAULT_MIN_DF,
    max_df: float = DEFAULT_MAX_DF,
    stops: StopWordList | None = None,
) -> Vocabulary:
    """Collect tokens whose df ratio lies in [min_df, max_df], both inclusive."""
    return _build_vocabulary_from_tokens(tokenize_corpus(corpus, stops), min_df, max_df)


def tfidf_weight(tf: float, df: int, n_documents: int) -> float:
    """``tf * ln(n_documents / df)``; natural log, zero when df == n_documents."""
    if df < 1 or df > n_documents:
        raise ValueError(f"df must be in 1..{n_documents}, got {df}")
    if tf < 0:
        raise ValueError(f"tf must be >= 0, got {tf}")
    return tf * math.log(n_documents / df)


def _vectorize_tokens(
    token_docs: Sequence[Sequence[str]], vocab: Vocabulary, mode: WeightMode
) -> DocTermMatrix:
    index = vocab.token_to_index
    dfs = vocab.document_frequency
    n = vocab.n_documents
    rows = []
    for tokens in token_docs:
        counts = Counter(tok for tok in tokens if tok in index)
        entries = []
        for tok, tf in sorted((index[t], c) for t, c in counts.items()):
            if mode is WeightMode.TFIDF:
                weight = tfidf_weight(tf, dfs[tok], n)
            elif mode is WeightMode.COUNT:
                weight = float(tf)
            else:
                weight = 1.0
            if weight != 0.0:
                entries.append((tok, weight))
        rows.append(tuple(entries))
    return DocTermMatrix(
        rows=tuple(rows), mode=mode, vocab_id=vocab.content_id(), n_features=len(vocab)
    )


def vectorize(
    corpus: Corpus,
    vocab: Vocabulary,
    mode: WeightMode = WeightMode.TFIDF,
    stops: StopWordList | None = None,
) -> DocTermMatrix:
    """Sparse per-document weights; out-of-vocabulary tokens are ignored.

    TF-IDF weights use the df statistics frozen in ``vocab``, so documents
    outside the fitting corpus (e.g. a test fold) never leak into them.
    """
    return _vectorize_tokens(tokenize_corpus(corpus, stops), vocab, mode)


def vectorize_texts(
    texts: Sequence[str],
    vocab: Vocabulary,
    mode: WeightMode = WeightMode.TFIDF,
    stops: StopWordList | None = None,
) -> DocTermMatrix:
    return _vectorize_tokens([tokenize(t, stops) for t in texts], vocab, mode)


def write_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """Export: lines of ``token TAB index TAB df``."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for i, (tok, df) in enumerate(zip(vocab.tokens, vocab.document_frequency)):
            fh.write(f"{tok}\t{i}\t{df}\n")


def read_vocabulary(path: str | Path, n_documents: int) -> Vocabulary:
    tokens: list[str] = []
    dfs: list[int] = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            tok, idx, df = line.split("\t")
            if int(idx) != len(tokens):
                raise ValueError("vocabulary file indices must be dense and ordered")
            tokens.append(tok)
            dfs.append(int(df))
    return Vocabulary(tokens=tuple(tokens), document_frequency=tuple(dfs), n_documents=n_documents)


def write_matrix(matrix: DocTermMatrix, path: str | Path) -> None:
    """Export: sparse triplets ``doc_id TAB feature_index TAB weight``."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for doc_id, row in enumerate(matrix.rows):
            for index, weight in row:
                fh.write(f"{doc_id}\t{index}\t{weight!r}\n")
