"""Heuristic token annotator for the classes the attacks act on.

This is deliberately a lexicon-and-suffix tagger, not a statistical NLP
pipeline: the attack generators only need the coarse classes Noun /
Adjective / NamedEntity / Number. Rules apply in a fixed precedence order
(part of the contract), so every token gets exactly one tag and tagging is a
pure function of the token list and the resources.

Known limitation: with no context model, words WordNet lists under several
parts of speech resolve by rule order alone (an adjective reading wins over
a noun reading), so attack strings can differ from what a full tagger would
produce.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from importlib import resources

from .lexres.glove import EmbeddingIndex, is_number_literal
from .lexres.wordnet import AntonymLexicon, WordPos


class TokenTag(Enum):
    NOUN = "noun"
    ADJECTIVE = "adjective"
    NAMED_ENTITY = "named-entity"
    NUMBER = "number"
    OTHER = "other"


@dataclass(frozen=True)
class TaggedToken:
    text: str
    start: int
    end: int
    tag: TokenTag = TokenTag.OTHER


_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "al", "ic", "less")
_SENTENCE_END = {".", "?", "!"}


@lru_cache(maxsize=None)
def _wordlist(name: str) -> frozenset[str]:
    text = resources.files("qarobust.data").joinpath(name).read_text(encoding="utf-8")
    return frozenset(
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


def function_words() -> frozenset[str]:
    return _wordlist("function_words.txt")


def number_words() -> frozenset[str]:
    return _wordlist("number_words.txt")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[TaggedToken]:
    """Whitespace tokens with leading/trailing punctuation split off.

    Interior punctuation (hyphens, apostrophes, en-dashes) stays inside the
    token. Every token records its character span, so joining tokens with the
    original separators reconstructs the input.
    """
    tokens: list[TaggedToken] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        a = i
        while a < j and _is_punct(text[a]):
            tokens.append(TaggedToken(text[a], a, a + 1))
            a += 1
        b = j
        while b > a and _is_punct(text[b - 1]):
            b -= 1
        if a < b:
            tokens.append(TaggedToken(text[a:b], a, b))
        for k in range(b, j):
            tokens.append(TaggedToken(text[k], k, k + 1))
        i = j
    return tokens


def noun_lemma_candidates(word: str) -> list[str]:
    """The word itself plus crude singular forms, most specific first."""
    word = word.lower()
    cands = [word]
    if word.endswith("ies") and len(word) > 4:
        cands.append(word[:-3] + "y")
    if word.endswith("es") and len(word) > 3:
        cands.append(word[:-2])
    if word.endswith("s") and len(word) > 3:
        cands.append(word[:-1])
    return cands


def _is_capitalized(token: str) -> bool:
    return bool(token) and token[0].isupper()


def _has_adj_suffix(word: str) -> bool:
    return any(word.endswith(s) and len(word) >= len(s) + 2 for s in _ADJ_SUFFIXES)


def tag(
    tokens: list[TaggedToken],
    lexicon: AntonymLexicon | None = None,
    embeddings: EmbeddingIndex | None = None,
) -> list[TaggedToken]:
    """Assign one tag per token by first matching rule.

    1. Number: numeric literal or spelled-out number word.
    2. NamedEntity: capitalized and not sentence-initial, or sentence-initial
       capitalized and absent from the function-word list.
    3. Adjective: WordNet adjective lemma, or an adjectival suffix.
    4. Noun: WordNet noun lemma.
    5. Other.

    The embeddings argument is accepted for call-site symmetry with the
    attack generators; the rules are lexicon-driven.
    """
    del embeddings
    func_words = function_words()
    num_words = number_words()
    out: list[TaggedToken] = []
    sentence_initial = True
    for token in tokens:
        word = token.text
        low = word.lower()
        if _is_punct(word) and len(word) == 1:
            out.append(replace(token, tag=TokenTag.OTHER))
            if word in _SENTENCE_END:
                sentence_initial = True
            continue
        if is_number_literal(word) or low in num_words:
            tag_ = TokenTag.NUMBER
        elif _is_capitalized(word) and (not sentence_initial or low not in func_words):
            tag_ = TokenTag.NAMED_ENTITY
        elif (lexicon is not None and lexicon.has_pos(low, WordPos.ADJECTIVE)) or _has_adj_suffix(low):
            tag_ = TokenTag.ADJECTIVE
        elif lexicon is not None and any(
            lexicon.has_pos(c, WordPos.NOUN) for c in noun_lemma_candidates(low)
        ):
            tag_ = TokenTag.NOUN
        else:
            tag_ = TokenTag.OTHER
        out.append(replace(token, tag=tag_))
        sentence_initial = False
    return out


def replace_spans(text: str, replacements: list[tuple[int, int, str]]) -> str:
    """Apply non-overlapping (start, end, new_text) replacements to text."""
    out = []
    last = 0
    for start, end, new in sorted(replacements):
        out.append(text[last:start])
        out.append(new)
        last = end
    out.append(text[last:])
    return "".join(out)
