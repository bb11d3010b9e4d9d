"""GloVe-format embedding loader and exact cosine nearest-neighbor search.

The search is an exact full scan with precomputed norms. The hot kernel (one
fused dot-product pass over the matrix) has a compiled implementation in
`_scan` with a numpy fallback in `_scan_py`; the backend is selected once at
import, and QAROBUST_NO_EXT=1 forces the fallback. Candidate filtering and
argmax selection happen outside the kernel so both backends share the exact
same tie-breaking: equal similarities resolve to the lower vocabulary index.
"""

from __future__ import annotations

import math
import os
import re
from enum import Enum
from pathlib import Path

import numpy as np

from ..errors import ParseError, ValidationError

if os.environ.get("QAROBUST_NO_EXT", "") not in ("", "0"):
    from . import _scan_py as _kernel
else:
    try:
        from . import _scan as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _scan_py as _kernel

SCAN_BACKEND: str = _kernel.BACKEND

_NUMBER_RE = re.compile(r"[+-]?\d[\d,]*(?:\.\d+)?(?:st|nd|rd|th)?", re.IGNORECASE)


def is_number_literal(token: str) -> bool:
    """True for integer/decimal literals, with comma groups and ordinal suffixes."""
    return bool(_NUMBER_RE.fullmatch(token))


class NeighborConstraint(Enum):
    ANY = "any"
    NUMERIC_ONLY = "numeric-only"


class EmbeddingIndex:
    """Immutable word-vector table with exact nearest-neighbor queries.

    Vocabulary entries are unique after case folding (first occurrence wins);
    lookups case-fold the query the same way.
    """

    def __init__(self, words: list[str], matrix: np.ndarray):
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(words):
            raise ValidationError("matrix shape does not match vocabulary size")
        norms = np.linalg.norm(matrix, axis=1)
        if not np.all(np.isfinite(matrix)):
            raise ValidationError("embedding matrix contains non-finite values")
        if np.any(norms == 0.0):
            bad = words[int(np.argmin(norms))]
            raise ValidationError(f"zero vector for word {bad!r}")
        self.words = list(words)
        self.matrix = matrix
        self.norms = norms
        self._row: dict[str, int] = {}
        for i, w in enumerate(words):
            folded = w.lower()
            if folded in self._row:
                raise ValidationError(f"duplicate vocabulary entry after case folding: {w!r}")
            self._row[folded] = i
        self._numeric_mask: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._row

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def row(self, word: str) -> int | None:
        return self._row.get(word.lower())

    def numeric_mask(self) -> np.ndarray:
        if self._numeric_mask is None:
            self._numeric_mask = np.fromiter(
                (is_number_literal(w) for w in self.words), dtype=bool, count=len(self.words)
            )
        return self._numeric_mask

    def cosine_scores(self, query_row: int, kernel=None) -> np.ndarray:
        """Cosine similarity of every vocabulary word against one row."""
        k = kernel if kernel is not None else _kernel
        out = np.empty(len(self.words), dtype=np.float64)
        k.cosine_scores(self.matrix, self.norms, self.matrix[query_row], float(self.norms[query_row]), out)
        return out


def load_glove(path: str | Path, max_vocab: int) -> EmbeddingIndex:
    """Load the first max_vocab entries of a GloVe text file.

    GloVe files are frequency-ordered, so the cap keeps the most frequent
    words. Duplicate words after case folding are skipped (first wins).
    """
    if max_vocab <= 0:
        raise ValidationError("max_vocab must be positive")
    path = Path(path)
    words: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    dim: int | None = None
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if len(words) >= max_vocab:
                break
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                raise ParseError(f"{path}:{lineno}: expected a word followed by vector values")
            word = parts[0]
            try:
                vec = np.array(parts[1:], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-numeric vector value") from exc
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise ParseError(
                    f"{path}:{lineno}: dimension {len(vec)} differs from first line ({dim})"
                )
            if not np.all(np.isfinite(vec)):
                raise ParseError(f"{path}:{lineno}: non-finite vector value")
            folded = word.lower()
            if folded in seen:
                continue
            if not float(np.linalg.norm(vec)) > 0.0:
                raise ValidationError(f"{path}:{lineno}: zero vector for word {word!r}")
            seen.add(folded)
            words.append(word)
            rows.append(vec)
    if not words:
        raise ParseError(f"{path}: no vectors loaded")
    return EmbeddingIndex(words, np.vstack(rows))


def _candidate_rows(index: EmbeddingIndex, word: str, constraint: NeighborConstraint) -> tuple[int, np.ndarray] | None:
    query_row = index.row(word)
    if query_row is None:
        return None
    # Vocabulary entries are unique after case folding, so the query's own
    # row is the only one that can equal the query case-insensitively.
    banned = np.zeros(len(index), dtype=bool)
    banned[query_row] = True
    if constraint is NeighborConstraint.NUMERIC_ONLY:
        allowed = index.numeric_mask() & ~banned
    else:
        allowed = ~banned
    return query_row, allowed


def top_neighbors(
    index: EmbeddingIndex,
    word: str,
    k: int = 1,
    constraint: NeighborConstraint = NeighborConstraint.ANY,
    kernel=None,
) -> list[str]:
    """The k nearest vocabulary words by cosine similarity, best first.

    Excludes the query word itself and anything equal to it after case
    folding; under NUMERIC_ONLY only number-like tokens qualify. Returns an
    empty list for out-of-vocabulary queries or when no candidate survives.
    Ties resolve to the lower vocabulary index, so results are deterministic.
    """
    found = _candidate_rows(index, word, constraint)
    if found is None:
        return []
    query_row, allowed = found
    if not allowed.any():
        return []
    scores = index.cosine_scores(query_row, kernel=kernel)
    scores[~allowed] = -math.inf
    if k == 1:
        return [index.words[int(np.argmax(scores))]]
    order = np.argsort(-scores, kind="stable")
    n = min(k, int(allowed.sum()))
    return [index.words[int(i)] for i in order[:n]]


def nearest(
    index: EmbeddingIndex,
    word: str,
    constraint: NeighborConstraint = NeighborConstraint.ANY,
    kernel=None,
) -> str | None:
    """The single nearest word, or None when no candidate exists."""
    best = top_neighbors(index, word, k=1, constraint=constraint, kernel=kernel)
    return best[0] if best else None
