"""Independent brute-force reference implementations used by the tests.

Everything here works on dense raw-count matrices with plain Python loops
and ``math.log``, deliberately sharing no code with the package under
test.
"""

from __future__ import annotations

import math


def multinomial_log_scores(
    counts: list[list[int]], labels: list[str], row: list[float], alpha: float = 1.0
) -> dict[str, float]:
    """Per-class joint log score: log prior plus weighted smoothed
    log-conditionals, evaluated term by term over the dense row."""
    classes = sorted(set(labels))
    n = len(labels)
    n_features = len(counts[0]) if counts else 0
    scores: dict[str, float] = {}
    for c in classes:
        class_rows = [x for x, lab in zip(counts, labels) if lab == c]
        score = math.log(len(class_rows) / n)
        totals = [sum(x[t] for x in class_rows) for t in range(n_features)]
        denom = sum(totals) + alpha * n_features
        for t in range(n_features):
            if row[t]:
                score += row[t] * math.log((totals[t] + alpha) / denom)
        scores[c] = score
    return scores


def bernoulli_log_scores(
    presence: list[list[int]], labels: list[str], row: list[int], alpha: float = 1.0
) -> dict[str, float]:
    """Per-class joint log score with explicit absence terms over the whole
    vocabulary; conditionals are (N_ct + alpha) / (N_c + 2 alpha)."""
    classes = sorted(set(labels))
    n = len(labels)
    n_features = len(presence[0]) if presence else 0
    scores: dict[str, float] = {}
    for c in classes:
        class_rows = [x for x, lab in zip(presence, labels) if lab == c]
        n_c = len(class_rows)
        score = math.log(n_c / n)
        for t in range(n_features):
            n_ct = sum(x[t] for x in class_rows)
            p = (n_ct + alpha) / (n_c + 2.0 * alpha)
            score += math.log(p) if row[t] else math.log(1.0 - p)
        scores[c] = score
    return scores


def argmax_label(scores: dict[str, float]) -> str:
    """Highest score wins; ties go to the lexicographically smallest label."""
    return min(scores, key=lambda c: (-scores[c], c))


def dense_to_sparse(row: list[float]) -> tuple[tuple[int, float], ...]:
    return tuple((i, float(w)) for i, w in enumerate(row) if w)
