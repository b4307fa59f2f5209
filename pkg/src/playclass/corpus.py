"""App-metadata ingestion, quality filters, and document composition.

Raw input is the app-store metadata CSV (one row per app). Ingestion maps
rows to :class:`AppRecord`, skipping rows it cannot trust (missing
category, malformed boolean flags) with per-reason counters. A
:class:`FilterProfile` then selects and relabels records, and each
surviving app is flattened into one classification text.
"""

from __future__ import annotations

import csv
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import DegenerateCorpusError, SchemaError

log = logging.getLogger(__name__)

REQUIRED_COLUMNS = (
    "AppName",
    "Category",
    "Description",
    "IsTopDeveloper",
    "ContentRating",
    "IsFree",
    "HaveInAppPurchases",
)
OPTIONAL_COLUMNS = ("Developer", "Price")

GAME_PREFIX = "GAME_"
GROUPED_GAME_LABEL = "GAMES"
DEFAULT_DROPPED_CATEGORIES = frozenset(
    {"COMICS", "LIBRARIES_AND_DEMO", "GAME_MUSIC", "GAME_WORD"}
)

_TRUE_TOKENS = {"true", "t", "1", "yes", "y"}
_FALSE_TOKENS = {"false", "f", "0", "no", "n"}


class AppFilter(str, Enum):
    ALL_APPS = "all"
    FILTERED_APPS = "filtered"


class CategoryScope(str, Enum):
    ALL_CATEGORIES = "all"
    ONLY_GAME_APPS = "games"
    GROUPED_GAME_APPS = "grouped"
    ONLY_OTHER_CATEGORIES = "other"


@dataclass(frozen=True)
class AppRecord:
    app_name: str
    developer: str
    is_top_developer: bool
    category: str
    is_free: bool
    price: float
    content_rating: str
    have_in_app_purchases: bool
    description: str
    extra: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class FilterProfile:
    """Dataset variant: which apps survive and how game labels are treated."""

    app_filter: AppFilter = AppFilter.ALL_APPS
    category_scope: CategoryScope = CategoryScope.ALL_CATEGORIES
    min_description_words: int = 100
    dropped_categories: frozenset[str] = DEFAULT_DROPPED_CATEGORIES

    def __post_init__(self) -> None:
        if self.min_description_words < 0:
            raise ValueError("min_description_words must be >= 0")
        for label in self.dropped_categories:
            if not label or label != label.strip() or any(ch.isspace() for ch in label):
                raise ValueError(f"invalid category label in dropped_categories: {label!r}")


class Document(NamedTuple):
    doc_id: int
    text: str
    label: str


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    def __post_init__(self) -> None:
        for i, doc in enumerate(self.documents):
            if doc.doc_id != i:
                raise ValueError(f"doc_ids must be dense 0..N-1, found {doc.doc_id} at {i}")

    @classmethod
    def from_pairs(cls, texts: Iterable[str], labels: Iterable[str]) -> "Corpus":
        docs = tuple(
            Document(i, text, label) for i, (text, label) in enumerate(zip(texts, labels))
        )
        return cls(documents=docs)

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def texts(self) -> list[str]:
        return [d.text for d in self.documents]

    @property
    def labels(self) -> list[str]:
        return [d.label for d in self.documents]

    @property
    def categories(self) -> set[str]:
        return {d.label for d in self.documents}

    def subset(self, indices: Sequence[int]) -> "Corpus":
        """New corpus of the selected documents, re-numbered densely."""
        docs = self.documents
        return Corpus.from_pairs(
            (docs[i].text for i in indices), (docs[i].label for i in indices)
        )


@dataclass
class IngestStats:
    rows_read: int = 0
    skipped: Counter = field(default_factory=Counter)

    @property
    def rows_skipped(self) -> int:
        return sum(self.skipped.values())

    @property
    def rows_kept(self) -> int:
        return self.rows_read - self.rows_skipped


def _parse_bool(raw: str | None) -> bool | None:
    if raw is None:
        return None
    token = raw.strip().lower()
    if token in _TRUE_TOKENS:
        return True
    if token in _FALSE_TOKENS:
        return False
    return None


def ingest_csv(path: str | Path) -> tuple[list[AppRecord], IngestStats]:
    """Parse the raw metadata CSV, returning records plus skip accounting.

    Rows with an empty category or a boolean flag that cannot be parsed are
    counted per reason and skipped; they never abort the run.
    """
    path = Path(path)
    stats = IngestStats()
    records: list[AppRecord] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        by_lower = {name.lower(): name for name in header if name}
        colmap: dict[str, str] = {}
        for canonical in REQUIRED_COLUMNS:
            actual = by_lower.get(canonical.lower())
            if actual is None:
                raise SchemaError(f"missing required column: {canonical}")
            colmap[canonical] = actual
        for canonical in OPTIONAL_COLUMNS:
            actual = by_lower.get(canonical.lower())
            if actual is not None:
                colmap[canonical] = actual
        known = set(colmap.values())

        for row in reader:
            stats.rows_read += 1

            def get(canonical: str) -> str:
                actual = colmap.get(canonical)
                value = row.get(actual) if actual else None
                return value if value is not None else ""

            category = get("Category").strip()
            if not category:
                stats.skipped["missing-category"] += 1
                log.debug("row %d skipped: missing category", stats.rows_read)
                continue

            booleans = {}
            bad_bool = None
            for canonical in ("IsTopDeveloper", "IsFree", "HaveInAppPurchases"):
                parsed = _parse_bool(get(canonical))
                if parsed is None:
                    bad_bool = canonical
                    break
                booleans[canonical] = parsed
            if bad_bool is not None:
                stats.skipped["bad-boolean"] += 1
                log.debug("row %d skipped: unparseable %s", stats.rows_read, bad_bool)
                continue

            try:
                price = float(get("Price") or 0.0)
            except ValueError:
                price = 0.0  # informational only, never fatal

            extra = {
                name: (row[name] if row[name] is not None else "")
                for name in header
                if name and name not in known
            }
            records.append(
                AppRecord(
                    app_name=get("AppName"),
                    developer=get("Developer"),
                    is_top_developer=booleans["IsTopDeveloper"],
                    category=category,
                    is_free=booleans["IsFree"],
                    price=price,
                    content_rating=get("ContentRating"),
                    have_in_app_purchases=booleans["HaveInAppPurchases"],
                    description=get("Description"),
                    extra=extra,
                )
            )
    if stats.rows_skipped:
        log.info(
            "ingest: %d/%d rows skipped (%s)",
            stats.rows_skipped,
            stats.rows_read,
            dict(stats.skipped),
        )
    return records, stats


def load_raw_csv(path: str | Path) -> list[AppRecord]:
    records, _ = ingest_csv(path)
    return records


def filter_top_developers(records: Sequence[AppRecord]) -> list[AppRecord]:
    """Keep only apps uploaded by top developers, order preserved."""
    return [r for r in records if r.is_top_developer]


def _bool_token(prefix: str, value: bool) -> str:
    return f"{prefix}_yes" if value else f"{prefix}_no"


def compose_document(record: AppRecord) -> str:
    """Flatten one app into its classification text.

    Field order is fixed (name, rating, boolean tokens, description) and
    whitespace is normalized to single spaces so corpora are
    byte-reproducible.
    """
    parts = [
        record.app_name,
        record.content_rating,
        _bool_token("isfree", record.is_free),
        _bool_token("iap", record.have_in_app_purchases),
        record.description,
    ]
    return " ".join(" ".join(p for p in parts if p).split())


def apply_filter_profile(records: Sequence[AppRecord], profile: FilterProfile) -> Corpus:
    """Apply quality filters and category scoping, then compose documents.

    Under ``FILTERED_APPS``, short-description apps are dropped first and
    the dropped-category check runs against the original label, so grouped
    and ungrouped variants of the same filter keep the same app set.
    """
    texts: list[str] = []
    labels: list[str] = []
    scope = profile.category_scope
    for record in records:
        if profile.app_filter is AppFilter.FILTERED_APPS:
            if len(record.description.split()) < profile.min_description_words:
                continue
            if record.category in profile.dropped_categories:
                continue
        label = record.category
        is_game = label.startswith(GAME_PREFIX)
        if scope is CategoryScope.ONLY_GAME_APPS and not is_game:
            continue
        if scope is CategoryScope.ONLY_OTHER_CATEGORIES and is_game:
            continue
        if scope is CategoryScope.GROUPED_GAME_APPS and is_game:
            label = GROUPED_GAME_LABEL
        texts.append(compose_document(record))
        labels.append(label)
    if not texts:
        raise DegenerateCorpusError(
            f"empty corpus: no records survived profile {profile.app_filter.value}"
            f"/{profile.category_scope.value}"
        )
    return Corpus.from_pairs(texts, labels)


def write_corpus_file(corpus: Corpus, path: str | Path) -> None:
    """Canonical corpus file: ``doc_id TAB category TAB text``, UTF-8, LF."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus.documents:
            text = " ".join(doc.text.split())  # guard tabs/newlines in the text
            fh.write(f"{doc.doc_id}\t{doc.label}\t{text}\n")


def read_corpus_file(path: str | Path) -> Corpus:
    texts: list[str] = []
    labels: list[str] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                doc_id, label, text = line.split("\t", 2)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno + 1}: expected 3 tab-separated fields") from exc
            if int(doc_id) != len(texts):
                raise ValueError(f"{path}:{lineno + 1}: doc_ids must be dense 0..N-1")
            texts.append(text)
            labels.append(label)
    if not texts:
        raise DegenerateCorpusError(f"empty corpus file: {path}")
    return Corpus.from_pairs(texts, labels)
