"""Distractor-sentence attacks on extractive-QA examples.

Two generators share one recipe: mutate the question, build a fake answer,
convert the pair into a declarative statement, and append that statement to
the context. The question and gold answers presented for evaluation are
never modified; only the context changes.

add_one_sent: nouns/adjectives in the question swap to WordNet antonyms and
named entities/numbers to embedding-space neighbors; the fake answer applies
the neighbor substitution to the first gold answer.

negation: inserts "not" before the question's first adjective and leaves the
rest of the question alone; the fake answer is built the same way.

Generation is deterministic: per-example randomness (only used to invent
fake answers for unanswerable questions) is seeded from (seed, example id),
so results do not depend on ordering or scheduling.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .corpus import Dataset, Example, SourceFormat, with_context
from .errors import ValidationError
from .lexres.glove import EmbeddingIndex, NeighborConstraint, top_neighbors
from .lexres.wordnet import AntonymLexicon, WordPos
from .metrics import normalize
from .tagger import TaggedToken, TokenTag, function_words, noun_lemma_candidates, replace_spans, tag, tokenize

MAX_COLLISION_RETRIES = 10

WH_WORDS = frozenset({"what", "which", "who", "whom", "whose", "when", "where", "why", "how"})
_COPULAS = frozenset({"is", "are", "was", "were"})


class AttackKind(Enum):
    ADD_ONE_SENT = "add-one-sent"
    NEGATION = "negation"


class SkipCode(Enum):
    EMPTY_QUESTION = "empty-question"
    NO_MUTATION = "no-mutation"
    NO_ADJECTIVE = "no-adjective"
    FAKE_ANSWER_COLLISION = "fake-answer-collision"


@dataclass(frozen=True)
class SkipReason:
    code: SkipCode
    detail: str = ""


@dataclass(frozen=True)
class AttackedExample:
    base: Example
    attack_sentence: str
    attacked_context: str
    attack_kind: AttackKind
    mutated_question: str
    fake_answer: str


def _example_rng(seed: int, example_id: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{example_id}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _match_case(replacement: str, original: str) -> str:
    if original[:1].isupper() and replacement:
        return replacement[0].upper() + replacement[1:]
    return replacement


_TAG_TO_POS = {TokenTag.NOUN: WordPos.NOUN, TokenTag.ADJECTIVE: WordPos.ADJECTIVE}


def _antonym_for(lexicon: AntonymLexicon, token: TaggedToken) -> str | None:
    pos = _TAG_TO_POS[token.tag]
    if pos is WordPos.NOUN:
        candidates = noun_lemma_candidates(token.text)
    else:
        candidates = [token.text.lower()]
    for lemma in candidates:
        ant = lexicon.first_antonym(lemma, pos)
        if ant is not None:
            return ant
    return None


def _neighbor(embeddings: EmbeddingIndex, token: str, numeric: bool, rank: int = 1) -> str | None:
    """rank-th nearest neighbor; numeric tokens prefer numeric candidates."""
    if numeric:
        found = top_neighbors(embeddings, token, k=rank, constraint=NeighborConstraint.NUMERIC_ONLY)
        if not found:
            found = top_neighbors(embeddings, token, k=rank, constraint=NeighborConstraint.ANY)
    else:
        found = top_neighbors(embeddings, token, k=rank, constraint=NeighborConstraint.ANY)
    if not found:
        return None
    return found[min(rank, len(found)) - 1]


def _mutate_question_add_one_sent(
    question: str, lexicon: AntonymLexicon, embeddings: EmbeddingIndex
) -> str:
    tokens = tag(tokenize(question), lexicon, embeddings)
    replacements: list[tuple[int, int, str]] = []
    for token in tokens:
        if token.tag in (TokenTag.NOUN, TokenTag.ADJECTIVE):
            antonym = _antonym_for(lexicon, token)
            if antonym is not None:
                replacements.append((token.start, token.end, _match_case(antonym, token.text)))
        elif token.tag in (TokenTag.NAMED_ENTITY, TokenTag.NUMBER):
            neighbor = _neighbor(embeddings, token.text, numeric=token.tag is TokenTag.NUMBER)
            if neighbor is not None:
                replacements.append((token.start, token.end, neighbor))
    return replace_spans(question, replacements)


def _mutate_question_negation(
    question: str, lexicon: AntonymLexicon | None, embeddings: EmbeddingIndex
) -> str | None:
    """Insert "not" before the first adjective; None when there is none."""
    tokens = tag(tokenize(question), lexicon, embeddings)
    for token in tokens:
        if token.tag is TokenTag.ADJECTIVE:
            return question[: token.start] + "not " + question[token.start :]
    return None


def _substituted_answer(
    answer: str,
    embeddings: EmbeddingIndex,
    rank: int,
    lexicon: AntonymLexicon | None,
) -> str:
    """Fake answer: entity/number tokens swap to the rank-th neighbor.

    Answers made only of common words would otherwise never change (and the
    attack would always be skipped), so when no entity or number is present
    every content token is substituted instead.
    """
    tokens = tag(tokenize(answer), lexicon, embeddings)
    targets = [t for t in tokens if t.tag in (TokenTag.NAMED_ENTITY, TokenTag.NUMBER)]
    if not targets:
        func = function_words()
        targets = [
            t
            for t in tokens
            if t.text.lower() not in func and any(ch.isalnum() for ch in t.text)
        ]
    replacements: list[tuple[int, int, str]] = []
    for token in targets:
        neighbor = _neighbor(
            embeddings, token.text, numeric=token.tag is TokenTag.NUMBER, rank=rank
        )
        if neighbor is not None:
            replacements.append((token.start, token.end, neighbor))
    return replace_spans(answer, replacements)


def _wh_kind(question: str) -> str:
    tokens = tokenize(question)
    for i, token in enumerate(tokens):
        low = token.text.lower()
        if low in WH_WORDS:
            if low == "how" and i + 1 < len(tokens) and tokens[i + 1].text.lower() == "many":
                return "how-many"
            return low
    return ""


def _synthesized_answer(question: str, embeddings: EmbeddingIndex, rng: random.Random) -> str:
    """Invented fake answer for questions with no gold answer to mutate."""
    kind = _wh_kind(question)
    if kind == "when":
        return str(rng.randrange(1000, 2100))
    if kind == "how-many":
        return str(rng.randrange(2, 100000))
    return rng.choice(_entityish_vocabulary(embeddings))


_ENTITYISH_CACHE: dict[int, list[str]] = {}


def _entityish_vocabulary(embeddings: EmbeddingIndex) -> list[str]:
    pool = _ENTITYISH_CACHE.get(id(embeddings))
    if pool is None:
        func = function_words()
        pool = [
            w
            for w in embeddings.words
            if len(w) >= 3 and w.isalpha() and w.lower() not in func
        ]
        if not pool:
            pool = list(embeddings.words)
        _ENTITYISH_CACHE[id(embeddings)] = pool
    return pool


def _build_fake_answer(
    example: Example,
    embeddings: EmbeddingIndex,
    lexicon: AntonymLexicon | None,
    rng: random.Random,
) -> str | SkipReason:
    """Mutated answer that never equals a gold answer after normalization."""
    original = example.gold_answers[0].text if example.gold_answers else ""
    if not original.strip():
        fake = _synthesized_answer(example.question, embeddings, rng)
        return fake if fake else SkipReason(SkipCode.NO_MUTATION, "no fake answer could be invented")
    normalized_golds = {normalize(g) for g in example.gold_texts}
    saw_change = False
    for rank in range(1, MAX_COLLISION_RETRIES + 1):
        fake = _substituted_answer(original, embeddings, rank, lexicon)
        if fake == original:
            continue
        saw_change = True
        if fake.strip() and normalize(fake) not in normalized_golds:
            return fake
    if not saw_change:
        return SkipReason(SkipCode.NO_MUTATION, f"answer {original!r} has no substitutable token")
    return SkipReason(
        SkipCode.FAKE_ANSWER_COLLISION,
        f"all mutations of {original!r} collide with a gold answer",
    )


def to_statement(mutated_question: str, fake_answer: str) -> str:
    """Convert a (mutated question, fake answer) pair into one declarative sentence.

    Ordered rules with a guaranteed fallback; the output always ends with "."
    and contains the fake answer verbatim.
    """
    body = mutated_question.strip()
    while body.endswith("?"):
        body = body[:-1].rstrip()
    tokens = tokenize(body)
    words = [t.text.lower() for t in tokens]

    # R1: leading What/Which/Who followed directly by a copula.
    if len(tokens) >= 2 and words[0] in ("what", "which", "who") and words[1] in _COPULAS:
        remainder = body[tokens[1].end :].strip()
        return f"{fake_answer} {tokens[1].text} {remainder}."

    # R2: a wh-word in the interior is replaced in place by the fake answer.
    for i in range(1, len(tokens)):
        if words[i] in WH_WORDS:
            return f"{body[: tokens[i].start]}{fake_answer}{body[tokens[i].end :]}."

    # R3: "How many X ..." keeps the counted phrase after the fake answer.
    if len(tokens) >= 2 and words[0] == "how" and words[1] == "many":
        remainder = body[tokens[1].end :].strip()
        return f"{fake_answer} {remainder}."

    # R4: "When/Where did S V ..." becomes "S V ... <prep> <fake>."
    if len(tokens) >= 3 and words[0] in ("when", "where") and words[1] in ("did", "does", "do"):
        remainder = body[tokens[1].end :].strip()
        preposition = "in" if words[0] == "when" else "at"
        return f"{remainder} {preposition} {fake_answer}."

    # R5: fallback; drop the leading wh-word if any and prefix the fake answer.
    if tokens and words[0] in WH_WORDS:
        remainder = body[tokens[0].end :].strip()
    else:
        remainder = body
    if not remainder:
        return f"{fake_answer}."
    return f"{fake_answer} {remainder}."


def _finish(
    example: Example,
    kind: AttackKind,
    mutated_question: str,
    fake_answer: str,
) -> AttackedExample:
    sentence = to_statement(mutated_question, fake_answer)
    return AttackedExample(
        base=example,
        attack_sentence=sentence,
        attacked_context=example.context + " " + sentence,
        attack_kind=kind,
        mutated_question=mutated_question,
        fake_answer=fake_answer,
    )


def add_one_sent(
    example: Example,
    lexicon: AntonymLexicon,
    embeddings: EmbeddingIndex,
    seed: int = 0,
) -> AttackedExample | SkipReason:
    """Antonym/neighbor distractor attack on one example."""
    if not example.question.strip():
        return SkipReason(SkipCode.EMPTY_QUESTION)
    mutated = _mutate_question_add_one_sent(example.question, lexicon, embeddings)
    if mutated == example.question:
        return SkipReason(SkipCode.NO_MUTATION, "question has no replaceable token")
    fake = _build_fake_answer(example, embeddings, lexicon, _example_rng(seed, example.id))
    if isinstance(fake, SkipReason):
        return fake
    return _finish(example, AttackKind.ADD_ONE_SENT, mutated, fake)


def negation(
    example: Example,
    embeddings: EmbeddingIndex,
    lexicon: AntonymLexicon | None = None,
    seed: int = 0,
) -> AttackedExample | SkipReason:
    """Negation distractor attack: "not" before the question's first adjective.

    The lexicon is optional; without it adjective detection falls back to
    suffix heuristics alone, which finds far fewer adjectives.
    """
    if not example.question.strip():
        return SkipReason(SkipCode.EMPTY_QUESTION)
    mutated = _mutate_question_negation(example.question, lexicon, embeddings)
    if mutated is None:
        return SkipReason(SkipCode.NO_ADJECTIVE)
    fake = _build_fake_answer(example, embeddings, lexicon, _example_rng(seed, example.id))
    if isinstance(fake, SkipReason):
        return fake
    return _finish(example, AttackKind.NEGATION, mutated, fake)


@dataclass(frozen=True)
class AttackRun:
    attacked: tuple[AttackedExample, ...]
    skipped: tuple[tuple[str, SkipReason], ...]

    def skip_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for _, reason in self.skipped:
            counts[reason.code.value] = counts.get(reason.code.value, 0) + 1
        return counts


def attack_dataset(
    dataset: Dataset,
    kind: AttackKind,
    embeddings: EmbeddingIndex,
    lexicon: AntonymLexicon | None = None,
    seed: int = 0,
    jobs: int = 1,
) -> AttackRun:
    """Attack every example; outputs keep dataset order regardless of jobs."""
    if kind is AttackKind.ADD_ONE_SENT and lexicon is None:
        raise ValidationError("the add-one-sent attack requires a WordNet lexicon")

    def run_one(example: Example) -> AttackedExample | SkipReason:
        if kind is AttackKind.ADD_ONE_SENT:
            return add_one_sent(example, lexicon, embeddings, seed=seed)
        return negation(example, embeddings, lexicon=lexicon, seed=seed)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, dataset.examples))
    else:
        results = [run_one(ex) for ex in dataset.examples]

    attacked: list[AttackedExample] = []
    skipped: list[tuple[str, SkipReason]] = []
    for example, result in zip(dataset.examples, results):
        if isinstance(result, SkipReason):
            skipped.append((example.id, result))
        else:
            attacked.append(result)
    return AttackRun(attacked=tuple(attacked), skipped=tuple(skipped))


def attacked_dataset(run: AttackRun, source: Dataset) -> Dataset:
    """The attacked examples as a Dataset (same schema, modified contexts)."""
    examples = tuple(with_context(a.base, a.attacked_context) for a in run.attacked)
    fmt = source.source_format
    if fmt is SourceFormat.MRQA:
        fmt = SourceFormat.SQUAD_V1
    return Dataset(name=f"{source.name}-attacked", examples=examples, source_format=fmt)


def sidecar_records(run: AttackRun, order: Iterable[Example], kind: AttackKind) -> list[dict]:
    """One log record per input example, in dataset order."""
    by_id: dict[str, AttackedExample] = {a.base.id: a for a in run.attacked}
    skips: dict[str, SkipReason] = {eid: reason for eid, reason in run.skipped}
    records = []
    for example in order:
        if example.id in by_id:
            a = by_id[example.id]
            records.append(
                {
                    "id": example.id,
                    "attack_kind": a.attack_kind.value,
                    "attack_sentence": a.attack_sentence,
                    "mutated_question": a.mutated_question,
                    "fake_answer": a.fake_answer,
                }
            )
        else:
            reason = skips[example.id]
            record = {"id": example.id, "attack_kind": kind.value, "skip_reason": reason.code.value}
            if reason.detail:
                record["skip_detail"] = reason.detail
            records.append(record)
    return records
