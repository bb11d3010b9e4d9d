"""Dataset ingestion: SQuAD-format JSON and MRQA-format JSONL.

Both loaders produce the same in-memory shape: a Dataset holding an ordered
tuple of Example records. A loaded Dataset is immutable and safe to share
across threads.

Character offsets are indices into the context as a Python string (Unicode
scalar values, not bytes). MRQA answers without a detected span carry the
offset sentinel -1 and skip the span check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any

from .errors import ParseError, ValidationError

NO_OFFSET = -1


class SourceFormat(Enum):
    SQUAD_V1 = "squad-v1"
    SQUAD_V2 = "squad-v2"
    MRQA = "mrqa"


@dataclass(frozen=True)
class GoldAnswer:
    text: str
    char_offset: int = NO_OFFSET


@dataclass(frozen=True)
class Example:
    id: str
    context: str
    question: str
    gold_answers: tuple[GoldAnswer, ...]
    is_impossible: bool = False

    def validate(self) -> None:
        if not self.is_impossible and not self.gold_answers:
            raise ValidationError(f"answerable example {self.id!r} has no gold answers")
        for gold in self.gold_answers:
            if gold.char_offset == NO_OFFSET:
                continue
            if gold.char_offset < 0:
                raise ValidationError(
                    f"example {self.id!r}: negative answer offset {gold.char_offset}"
                )
            end = gold.char_offset + len(gold.text)
            if self.context[gold.char_offset : end] != gold.text:
                raise ValidationError(
                    f"example {self.id!r}: answer text {gold.text!r} does not match "
                    f"context at offset {gold.char_offset}"
                )

    @property
    def gold_texts(self) -> list[str]:
        return [g.text for g in self.gold_answers]


@dataclass(frozen=True)
class Dataset:
    name: str
    examples: tuple[Example, ...]
    source_format: SourceFormat

    def __len__(self) -> int:
        return len(self.examples)

    @cached_property
    def by_id(self) -> dict[str, Example]:
        return {ex.id: ex for ex in self.examples}

    @property
    def has_unanswerable(self) -> bool:
        return any(ex.is_impossible for ex in self.examples)


def _validate_unique_ids(examples: list[Example]) -> None:
    seen: set[str] = set()
    for ex in examples:
        if ex.id in seen:
            raise ValidationError(f"duplicate question id {ex.id!r}")
        seen.add(ex.id)


def load_squad(path: str | Path, name: str | None = None) -> Dataset:
    """Load a SQuAD 1.1 or 2.0 JSON file.

    The format is detected from the presence of the "is_impossible" key:
    files that never carry it are treated as SQuAD 1.1 and every example is
    answerable.
    """
    path = Path(path)
    raw = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        byte_offset = len(raw[: exc.pos].encode("utf-8"))
        raise ParseError(f"{path}: malformed JSON at byte offset {byte_offset}: {exc.msg}") from exc

    if not isinstance(doc, dict) or not isinstance(doc.get("data"), list):
        raise ValidationError(f"{path}: expected a top-level 'data' array")

    examples: list[Example] = []
    saw_impossible_key = False
    for article in doc["data"]:
        for paragraph in article.get("paragraphs", []):
            context = paragraph["context"]
            for qa in paragraph.get("qas", []):
                if "is_impossible" in qa:
                    saw_impossible_key = True
                golds = tuple(
                    GoldAnswer(text=a["text"], char_offset=a.get("answer_start", NO_OFFSET))
                    for a in qa.get("answers", [])
                )
                ex = Example(
                    id=str(qa["id"]),
                    context=context,
                    question=qa["question"],
                    gold_answers=golds,
                    is_impossible=bool(qa.get("is_impossible", False)),
                )
                ex.validate()
                examples.append(ex)
    _validate_unique_ids(examples)

    fmt = SourceFormat.SQUAD_V2 if saw_impossible_key else SourceFormat.SQUAD_V1
    if fmt is SourceFormat.SQUAD_V1 and any(ex.is_impossible for ex in examples):
        raise ValidationError(f"{path}: v1-format dataset contains unanswerable examples")
    return Dataset(name=name or path.stem, examples=tuple(examples), source_format=fmt)


def squad_document(dataset: Dataset, meta: dict[str, Any] | None = None) -> dict[str, Any]:
    """Render a Dataset as a SQuAD-schema JSON document.

    Consecutive examples sharing a context are grouped into one paragraph, so
    a load/save/load round trip preserves example order and content.
    """
    paragraphs: list[dict[str, Any]] = []
    write_impossible = dataset.source_format is not SourceFormat.SQUAD_V1
    for ex in dataset.examples:
        qa: dict[str, Any] = {
            "id": ex.id,
            "question": ex.question,
            "answers": [
                {"text": g.text, "answer_start": g.char_offset} for g in ex.gold_answers
            ],
        }
        if write_impossible:
            qa["is_impossible"] = ex.is_impossible
        if paragraphs and paragraphs[-1]["context"] == ex.context:
            paragraphs[-1]["qas"].append(qa)
        else:
            paragraphs.append({"context": ex.context, "qas": [qa]})
    doc: dict[str, Any] = {
        "version": dataset.source_format.value,
        "data": [{"title": dataset.name, "paragraphs": paragraphs}],
    }
    if meta is not None:
        doc["meta"] = meta
    return doc


def save_squad(dataset: Dataset, path: str | Path, meta: dict[str, Any] | None = None) -> None:
    doc = squad_document(dataset, meta)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def with_context(example: Example, context: str) -> Example:
    """Copy an example with a new context (offsets are left untouched)."""
    return replace(example, context=context)


def load_mrqa(path: str | Path, name: str | None = None) -> Dataset:
    """Load an MRQA shared-task JSONL file (header line, then one record per line).

    Every MRQA question is answerable. All answer strings are kept as golds;
    only the first detected span contributes a character offset, the rest
    carry the -1 sentinel. Any unreadable record aborts the load.
    """
    path = Path(path)
    examples: list[Example] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from exc
            if lineno == 1 and "header" in record:
                continue
            try:
                examples.extend(_mrqa_examples(record, lineno))
            except KeyError as exc:
                raise ValidationError(f"{path}:{lineno}: missing required field {exc}") from exc
    _validate_unique_ids(examples)
    return Dataset(name=name or path.stem, examples=tuple(examples), source_format=SourceFormat.MRQA)


def _mrqa_examples(record: dict[str, Any], lineno: int) -> list[Example]:
    context = record["context"]
    out = []
    for qa in record["qas"]:
        golds: list[GoldAnswer] = []
        detected = qa.get("detected_answers") or []
        if detected:
            first = detected[0]
            span = first["char_spans"][0]
            golds.append(GoldAnswer(text=first["text"], char_offset=int(span[0])))
        detected_text = golds[0].text if golds else None
        for answer in qa["answers"]:
            if answer == detected_text:
                continue
            golds.append(GoldAnswer(text=answer, char_offset=NO_OFFSET))
        ex = Example(
            id=str(qa["qid"]),
            context=context,
            question=qa["question"],
            gold_answers=tuple(golds),
            is_impossible=False,
        )
        try:
            ex.validate()
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from exc
        out.append(ex)
    return out
