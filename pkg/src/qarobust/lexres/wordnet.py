"""WordNet 3.0 database-file parser and antonym lexicon.

Reads the plain-text data.{noun,verb,adj,adv} files (wndb format) and
collects every lemma pair connected by the "!" antonym pointer. Antonymy is
stored lemma-level with symmetry closure applied; multiword lemmas keep
their spaces. The lexicon also records which lemmas WordNet lists under each
part of speech, which the tagger uses for its noun/adjective rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..errors import ParseError, ResourceError


class WordPos(Enum):
    NOUN = "noun"
    ADJECTIVE = "adj"
    ADVERB = "adv"
    VERB = "verb"


_DATA_FILES = {
    WordPos.NOUN: "data.noun",
    WordPos.ADJECTIVE: "data.adj",
    WordPos.ADVERB: "data.adv",
    WordPos.VERB: "data.verb",
}
_INDEX_FILES = ["index.noun", "index.adj", "index.adv", "index.verb"]

# Pointer pos characters; satellite adjectives live in data.adj.
_POS_CHAR = {"n": WordPos.NOUN, "v": WordPos.VERB, "a": WordPos.ADJECTIVE, "s": WordPos.ADJECTIVE, "r": WordPos.ADVERB}


@dataclass
class AntonymLexicon:
    _antonyms: dict[tuple[str, WordPos], tuple[str, ...]] = field(default_factory=dict)
    _pos_lemmas: dict[WordPos, frozenset[str]] = field(default_factory=dict)

    def antonyms(self, lemma: str, pos: WordPos | None = None) -> tuple[str, ...]:
        """Antonym lemmas for (lemma, pos), sorted; all parts of speech when pos is None."""
        lemma = lemma.lower()
        if pos is not None:
            return self._antonyms.get((lemma, pos), ())
        merged: set[str] = set()
        for p in WordPos:
            merged.update(self._antonyms.get((lemma, p), ()))
        return tuple(sorted(merged))

    def first_antonym(self, lemma: str, pos: WordPos) -> str | None:
        ants = self.antonyms(lemma, pos)
        return ants[0] if ants else None

    def has_pos(self, lemma: str, pos: WordPos) -> bool:
        return lemma.lower() in self._pos_lemmas.get(pos, frozenset())

    def pairs(self):
        """Iterate (lemma, pos, antonym) triples as stored."""
        for (lemma, pos), ants in self._antonyms.items():
            for ant in ants:
                yield lemma, pos, ant

    def __len__(self) -> int:
        return len(self._antonyms)


def _clean_lemma(raw: str) -> str:
    # Adjective entries may carry a syntactic marker suffix such as "(p)".
    if raw.endswith(")") and "(" in raw:
        raw = raw[: raw.index("(")]
    return raw.replace("_", " ").lower()


def _parse_data_file(path: Path):
    """Yield (offset, lemmas, antonym_pointers) per synset line.

    antonym_pointers are (source_word_num, target_offset, target_pos_char,
    target_word_num) with word numbers 1-based and 0 meaning "all words".
    """
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.startswith("  ") or not line.strip():
                continue
            head = line.split("|", 1)[0]
            fields = head.split()
            try:
                offset = int(fields[0])
                w_cnt = int(fields[3], 16)
                lemmas = [_clean_lemma(fields[4 + 2 * i]) for i in range(w_cnt)]
                p_idx = 4 + 2 * w_cnt
                p_cnt = int(fields[p_idx])
                pointers = []
                for i in range(p_cnt):
                    sym, tgt_off, tgt_pos, src_tgt = fields[p_idx + 1 + 4 * i : p_idx + 5 + 4 * i]
                    if sym != "!":
                        continue
                    pointers.append(
                        (int(src_tgt[:2], 16), int(tgt_off), tgt_pos, int(src_tgt[2:], 16))
                    )
            except (IndexError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: malformed synset record") from exc
            yield offset, lemmas, pointers


def load_wordnet(directory: str | Path) -> AntonymLexicon:
    """Build the antonym lexicon from a WordNet 3.0 database directory."""
    directory = Path(directory)
    missing = [
        name
        for name in list(_DATA_FILES.values()) + _INDEX_FILES
        if not (directory / name).is_file()
    ]
    if missing:
        raise ResourceError(f"{directory}: missing WordNet database files: {', '.join(missing)}")

    # First pass: synset words, keyed by (pos-file, offset) so pointers resolve.
    synsets: dict[tuple[WordPos, int], list[str]] = {}
    parsed: dict[WordPos, list] = {}
    for pos, name in _DATA_FILES.items():
        rows = list(_parse_data_file(directory / name))
        parsed[pos] = rows
        for offset, lemmas, _ in rows:
            synsets[(pos, offset)] = lemmas

    antonyms: dict[tuple[str, WordPos], set[str]] = {}
    pos_lemmas: dict[WordPos, set[str]] = {p: set() for p in WordPos}

    def link(a: str, b: str, pos: WordPos) -> None:
        if a == b:
            return
        antonyms.setdefault((a, pos), set()).add(b)
        antonyms.setdefault((b, pos), set()).add(a)

    for pos, rows in parsed.items():
        for offset, lemmas, pointers in rows:
            pos_lemmas[pos].update(lemmas)
            for src_num, tgt_off, tgt_pos_char, tgt_num in pointers:
                tgt_pos = _POS_CHAR.get(tgt_pos_char)
                if tgt_pos is None:
                    continue
                target = synsets.get((tgt_pos, tgt_off))
                if target is None:
                    continue
                sources = lemmas if src_num == 0 else lemmas[src_num - 1 : src_num]
                targets = target if tgt_num == 0 else target[tgt_num - 1 : tgt_num]
                for a in sources:
                    for b in targets:
                        link(a, b, pos)

    return AntonymLexicon(
        _antonyms={key: tuple(sorted(vals)) for key, vals in antonyms.items()},
        _pos_lemmas={p: frozenset(v) for p, v in pos_lemmas.items()},
    )
