"""Deterministic bag-of-words tokenization.

The pipeline is fixed: Unicode lowercasing, every non-[a-z] codepoint acts
as a separator (this also strips digits and punctuation), stop words and
single-letter leftovers are dropped. Token order and multiplicity are
preserved so multinomial counts stay meaningful.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

MIN_TOKEN_LEN = 2

_TOKEN_RE = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class StopWordList:
    words: frozenset[str]
    source_name: str

    def __post_init__(self) -> None:
        for w in self.words:
            if not w or w != w.lower():
                raise ValueError(f"stop word entries must be lowercase and nonempty: {w!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def __len__(self) -> int:
        return len(self.words)

    def fingerprint(self) -> str:
        """Content hash; two lists with the same words share a fingerprint."""
        digest = hashlib.sha256("\n".join(sorted(self.words)).encode()).hexdigest()
        return digest[:16]


def _parse_stop_lines(lines: list[str], source_name: str) -> StopWordList:
    words = set()
    for line in lines:
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(word.lower())
    return StopWordList(words=frozenset(words), source_name=source_name)


@lru_cache(maxsize=1)
def default_stop_words() -> StopWordList:
    """The embedded 318-word English list; pinned so corpora are reproducible."""
    text = resources.files("playclass").joinpath("data/stopwords_en.txt").read_text("utf-8")
    return _parse_stop_lines(text.splitlines(), source_name="builtin:english-318")


def load_stop_words(path: str | Path) -> StopWordList:
    """Load a custom list: one word per line, UTF-8, '#' comments ignored."""
    lines = Path(path).read_text("utf-8").splitlines()
    return _parse_stop_lines(lines, source_name=str(path))


def tokenize(text: str, stops: StopWordList | None = None) -> list[str]:
    """Split ``text`` into lowercase alphabetic tokens.

    Digits and punctuation separate tokens rather than being deleted in
    place, so "mp3" yields "mp". Tokens shorter than ``MIN_TOKEN_LEN`` or
    contained in ``stops`` are dropped.
    """
    if stops is None:
        stops = default_stop_words()
    return [
        tok
        for tok in _TOKEN_RE.findall(text.lower())
        if len(tok) >= MIN_TOKEN_LEN and tok not in stops.words
    ]
