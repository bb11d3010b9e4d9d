"""Answer scoring: normalization, token-bag F1, exact match, and aggregates.

Scores are percentages in [0, 100]. Rounding to one decimal happens only
when a report is serialized, never here.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

_ARTICLES = frozenset({"a", "an", "the"})


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def normalize(text: str) -> str:
    """Lowercase, strip punctuation, drop articles, collapse whitespace."""
    lowered = text.lower()
    no_punct = "".join(ch for ch in lowered if not _is_punct(ch))
    tokens = [t for t in no_punct.split() if t not in _ARTICLES]
    return " ".join(tokens)


def answer_tokens(text: str) -> list[str]:
    return normalize(text).split()


def f1_score(prediction: str, golds: Sequence[str], is_impossible: bool = False) -> float:
    """Max token-bag F1 over gold answers, scaled to [0, 100].

    An unanswerable question scores 100 when the normalized prediction is
    empty and 0 otherwise.
    """
    if is_impossible:
        return 100.0 if normalize(prediction) == "" else 0.0
    if not golds:
        raise ValueError("answerable question requires at least one gold answer")
    pred_tokens = answer_tokens(prediction)
    best = 0.0
    for gold in golds:
        gold_tokens = answer_tokens(gold)
        if not pred_tokens or not gold_tokens:
            score = 100.0 if pred_tokens == gold_tokens else 0.0
        else:
            common = Counter(pred_tokens) & Counter(gold_tokens)
            n_same = sum(common.values())
            if n_same == 0:
                score = 0.0
            else:
                precision = n_same / len(pred_tokens)
                recall = n_same / len(gold_tokens)
                score = 200.0 * precision * recall / (precision + recall)
        best = max(best, score)
    return best


def em_score(prediction: str, golds: Sequence[str], is_impossible: bool = False) -> float:
    """Exact match on normalized strings: 100 or 0."""
    if is_impossible:
        return 100.0 if normalize(prediction) == "" else 0.0
    if not golds:
        raise ValueError("answerable question requires at least one gold answer")
    pred = normalize(prediction)
    return 100.0 if any(pred == normalize(g) for g in golds) else 0.0


class Metric(Enum):
    F1 = "f1"
    EM = "em"


@dataclass(frozen=True)
class ScoreRecord:
    id: str
    f1: float
    em: float


def per(records: Iterable[ScoreRecord], metric: Metric = Metric.F1) -> float:
    """Mean score over records (the dataset-level performance number)."""
    records = list(records)
    if not records:
        raise ValueError("cannot average an empty record list")
    if metric is Metric.F1:
        return sum(r.f1 for r in records) / len(records)
    return sum(r.em for r in records) / len(records)


def delta(per_original: float, per_attacked: float) -> float:
    """Robustness gap: original performance minus attacked performance."""
    return per_original - per_attacked
