"""Synthetic corpus generators shared by the evaluation and acceptance tests."""

from __future__ import annotations

import random
import string

from playclass.corpus import AppRecord, Corpus


def alpha_ids(count: int, prefix: str = "tok") -> list[str]:
    """Distinct purely-alphabetic token names (digits would not survive
    tokenization)."""
    ids = []
    letters = string.ascii_lowercase
    for i in range(count):
        suffix = ""
        j = i
        for _ in range(3):
            suffix = letters[j % 26] + suffix
            j //= 26
        ids.append(prefix + suffix)
    return ids


def separable_corpus(
    n_classes: int = 4,
    docs_per_class: int = 50,
    tokens_per_class: int = 20,
    shared_tokens: int = 20,
    doc_len: int = 20,
    noise: float = 0.5,
    seed: int = 0,
) -> Corpus:
    """Each class has its own token pool plus a shared noise pool; with
    ``noise=0`` the classes are perfectly separable."""
    rng = random.Random(seed)
    class_names = [f"CLASS{letter}" for letter in string.ascii_uppercase[:n_classes]]
    pools = {
        name: alpha_ids(tokens_per_class, prefix=f"c{i}x")
        for i, name in enumerate(class_names)
    }
    shared = alpha_ids(shared_tokens, prefix="noise")
    texts, labels = [], []
    for name in class_names:
        for _ in range(docs_per_class):
            words = [
                rng.choice(shared) if rng.random() < noise else rng.choice(pools[name])
                for _ in range(doc_len)
            ]
            texts.append(" ".join(words))
            labels.append(name)
    return Corpus.from_pairs(texts, labels)


def game_like_records(
    n_game_classes: int = 8,
    n_other_classes: int = 8,
    docs_per_class: int = 24,
    class_vocab: int = 100,
    shared_fraction: float = 0.6,
    doc_len: int = 40,
    seed: int = 0,
) -> list[AppRecord]:
    """App records for the grouping experiment: game classes draw
    ``shared_fraction`` of their vocabulary from one common pool (so they
    are mutually confusable), other classes have disjoint vocabularies."""
    rng = random.Random(seed)
    n_shared = int(class_vocab * shared_fraction)
    n_own = class_vocab - n_shared
    shared_pool = alpha_ids(n_shared, prefix="gshared")
    records = []
    names = []
    for g in range(n_game_classes):
        names.append((f"GAME_{string.ascii_uppercase[g]}", shared_pool + alpha_ids(n_own, prefix=f"gown{string.ascii_lowercase[g]}")))
    for o in range(n_other_classes):
        names.append((f"OTHER_{string.ascii_uppercase[o]}", alpha_ids(class_vocab, prefix=f"oth{string.ascii_lowercase[o]}")))
    for label, pool in names:
        for d in range(docs_per_class):
            words = [rng.choice(pool) for _ in range(doc_len)]
            records.append(
                AppRecord(
                    app_name=f"{label.lower()} app {string.ascii_lowercase[d % 26]}",
                    developer="synthetic",
                    is_top_developer=True,
                    category=label,
                    is_free=rng.random() < 0.5,
                    price=0.0,
                    content_rating="Everyone",
                    have_in_app_purchases=rng.random() < 0.5,
                    description=" ".join(words),
                )
            )
    return records
