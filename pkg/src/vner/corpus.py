"""Tokens, sentences, CoNLL column I/O and IOB2 utilities.

Sentences are immutable. NE tags are normalized to IOB2 on read, so an
``I-X`` that does not continue an ``X`` entity becomes ``B-X``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, TextIO

POS = "POS"
CHUNK = "CHUNK"
REGEXP = "REGEXP"
NE = "NE"
ANNOTATION_KEYS = frozenset({POS, CHUNK, REGEXP, NE})

ENTITY_TYPES = ("PER", "LOC", "ORG", "MISC")
DEFAULT_COLUMNS = ("word", POS, CHUNK, NE)
PLACEHOLDERS = {POS: "-", CHUNK: "-", NE: "O", REGEXP: "NA"}

_TAG_RE = re.compile(r"^(B|I)-(PER|LOC|ORG|MISC)$")


class ConllFormatError(ValueError):
    """Malformed CoNLL input; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def is_valid_tag(tag: str) -> bool:
    return tag == "O" or _TAG_RE.match(tag) is not None


def split_tag(tag: str) -> tuple[str, str | None]:
    """``"B-LOC"`` -> ``("B", "LOC")``; ``"O"`` -> ``("O", None)``."""
    if tag == "O":
        return "O", None
    prefix, _, label = tag.partition("-")
    return prefix, label


@dataclass(frozen=True)
class Token:
    word: str
    annotations: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.word:
            raise ValueError("token word must be non-empty")
        unknown = set(self.annotations) - ANNOTATION_KEYS
        if unknown:
            raise ValueError(f"unknown annotation keys: {sorted(unknown)}")
        ne = self.annotations.get(NE)
        if ne is not None and not is_valid_tag(ne):
            raise ValueError(f"invalid NE tag {ne!r}")
        object.__setattr__(self, "annotations", MappingProxyType(dict(self.annotations)))

    def get(self, key: str, default: str | None = None) -> str | None:
        return self.annotations.get(key, default)

    def with_annotations(self, **updates: str | None) -> "Token":
        """Copy with annotations replaced; a value of ``None`` removes the key."""
        ann = dict(self.annotations)
        for key, value in updates.items():
            if value is None:
                ann.pop(key, None)
            else:
                ann[key] = value
        return Token(self.word, ann)

    def __eq__(self, other):
        if not isinstance(other, Token):
            return NotImplemented
        return self.word == other.word and dict(self.annotations) == dict(other.annotations)

    def __hash__(self):
        return hash((self.word, tuple(sorted(self.annotations.items()))))

    def __repr__(self):
        return f"Token({self.word!r}, {dict(self.annotations)!r})"


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self):
        return len(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def __iter__(self):
        return iter(self.tokens)

    @property
    def words(self) -> list[str]:
        return [t.word for t in self.tokens]

    def column(self, key: str, default: str | None = None) -> list[str | None]:
        return [t.get(key, default) for t in self.tokens]

    def has(self, key: str) -> bool:
        return bool(self.tokens) and all(key in t.annotations for t in self.tokens)

    @property
    def tags(self) -> list[str]:
        return [t.get(NE, "O") for t in self.tokens]

    def with_column(self, key: str, values: Sequence[str | None]) -> "Sentence":
        if len(values) != len(self.tokens):
            raise ValueError(f"expected {len(self.tokens)} values, got {len(values)}")
        return Sentence(tuple(t.with_annotations(**{key: v}) for t, v in zip(self.tokens, values)))

    def with_tags(self, tags: Sequence[str]) -> "Sentence":
        return self.with_column(NE, list(tags))

    def without(self, key: str) -> "Sentence":
        return self.with_column(key, [None] * len(self.tokens))

    @classmethod
    def from_columns(cls, words: Sequence[str], **columns: Sequence[str]) -> "Sentence":
        """Build from parallel lists, e.g. ``Sentence.from_columns(w, POS=p, NE=t)``."""
        tokens = []
        for i, w in enumerate(words):
            tokens.append(Token(w, {k: v[i] for k, v in columns.items()}))
        return cls(tuple(tokens))


@dataclass(frozen=True)
class EntitySpan:
    start: int
    end: int
    label: str
    score: float = 0.0

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"span start {self.start} > end {self.end}")

    def __len__(self):
        return self.end - self.start + 1

    @property
    def key(self) -> tuple[int, int, str]:
        return (self.start, self.end, self.label)

    def overlaps(self, other: "EntitySpan") -> bool:
        return self.start <= other.end and other.start <= self.end


def repair_tags(tags: Iterable[str]) -> list[str]:
    """Normalize to IOB2: an ``I-X`` not following ``B-X``/``I-X`` becomes ``B-X``.

    Also converts IOB1 input, where only a boundary between adjacent
    same-type entities is marked with ``B-``.
    """
    out = []
    prev_label = None
    for tag in tags:
        prefix, label = split_tag(tag)
        if prefix == "I" and label != prev_label:
            tag = "B-" + label
        out.append(tag)
        prev_label = label
    return out


def is_iob2(tags: Sequence[str]) -> bool:
    return all(is_valid_tag(t) for t in tags) and list(tags) == repair_tags(tags)


def spans_from_tags(tags: Sequence[str], logprobs: Sequence[float] | None = None) -> list[EntitySpan]:
    """Maximal entity spans of an IOB2 sequence, ordered by start.

    Invalid ``I-X`` tags are promoted to ``B-X`` first. With ``logprobs`` the
    span score is the mean per-token log-probability, otherwise 0.
    """
    tags = repair_tags(tags)
    spans = []
    start = None
    for i, tag in enumerate(tags + ["O"]):
        prefix, _ = split_tag(tag)
        if start is not None and prefix != "I":
            label = split_tag(tags[start])[1]
            end = i - 1
            score = 0.0
            if logprobs is not None:
                score = sum(logprobs[start : end + 1]) / (end - start + 1)
            spans.append(EntitySpan(start, end, label, score))
            start = None
        if prefix == "B":
            start = i
    return spans


def tags_from_spans(spans: Iterable[EntitySpan], length: int) -> list[str]:
    """Write non-overlapping spans as IOB2 over an all-``O`` baseline."""
    tags = ["O"] * length
    for span in spans:
        if span.end >= length:
            raise ValueError(f"span {span.key} outside sentence of length {length}")
        if any(t != "O" for t in tags[span.start : span.end + 1]):
            raise ValueError(f"span {span.key} overlaps an earlier span")
        tags[span.start] = "B-" + span.label
        for i in range(span.start + 1, span.end + 1):
            tags[i] = "I-" + span.label
    return tags


def extract_spans(sentence: Sentence, logprobs: Sequence[float] | None = None) -> list[EntitySpan]:
    return spans_from_tags(sentence.tags, logprobs)


def reverse_sentence(sentence: Sentence) -> Sentence:
    """Reverse token order; NE tags are relabeled so the result is IOB2."""
    tokens = sentence.tokens[::-1]
    rev = Sentence(tokens)
    if not any(NE in t.annotations for t in sentence.tokens):
        return rev
    n = len(tokens)
    mirrored = [EntitySpan(n - 1 - s.end, n - 1 - s.start, s.label) for s in extract_spans(sentence)]
    mirrored.sort(key=lambda s: s.start)
    return rev.with_tags(tags_from_spans(mirrored, n))


def read_conll(stream: TextIO | Iterable[str], columns: Sequence[str] | None = None) -> list[Sentence]:
    """Parse whitespace-separated CoNLL columns into sentences.

    Without ``columns`` a line holds 2-4 fields read as word, POS, CHUNK,
    NE. With ``columns`` (names from ``word``/``POS``/``CHUNK``/``NE``/
    ``REGEXP``) every line must have exactly that many fields.
    ``-DOCSTART-`` lines are skipped.
    """
    if columns is not None:
        columns = tuple(columns)
        bad = [c for c in columns if c != "word" and c not in ANNOTATION_KEYS]
        if bad or columns[:1] != ("word",):
            raise ValueError(f"invalid column spec {columns!r}")
    sentences: list[Sentence] = []
    current: list[Token] = []
    raw_tags: list[str] = []

    def flush():
        if current:
            if raw_tags:
                fixed = repair_tags(raw_tags)
                tokens = [t.with_annotations(NE=tag) for t, tag in zip(current, fixed)]
            else:
                tokens = current
            sentences.append(Sentence(tuple(tokens)))
        current.clear()
        raw_tags.clear()

    for lineno, line in enumerate(stream, 1):
        fields = line.split()
        if not fields:
            flush()
            continue
        if fields[0] == "-DOCSTART-":
            continue
        if columns is None:
            if not 2 <= len(fields) <= 4:
                raise ConllFormatError(f"expected 2-4 columns, got {len(fields)}", lineno)
            names = DEFAULT_COLUMNS[: len(fields)]
        else:
            if len(fields) != len(columns):
                raise ConllFormatError(f"expected {len(columns)} columns, got {len(fields)}", lineno)
            names = columns
        ann = dict(zip(names[1:], fields[1:]))
        if NE in ann:
            if not is_valid_tag(ann[NE]):
                raise ConllFormatError(f"invalid NE tag {ann[NE]!r}", lineno)
            if current and len(raw_tags) != len(current):
                raise ConllFormatError("NE column present on some lines only", lineno)
            raw_tags.append(ann[NE])
        elif raw_tags:
            raise ConllFormatError("NE column present on some lines only", lineno)
        current.append(Token(fields[0], ann))
    flush()
    return sentences


def write_conll(
    sentences: Iterable[Sentence],
    stream: TextIO,
    columns: Sequence[str] = DEFAULT_COLUMNS,
) -> None:
    """Write tab-separated columns; a missing annotation gets its placeholder."""
    for sentence in sentences:
        for tok in sentence:
            fields = []
            for col in columns:
                if col == "word":
                    fields.append(tok.word)
                else:
                    fields.append(tok.get(col, PLACEHOLDERS[col]))
            stream.write("\t".join(fields) + "\n")
        stream.write("\n")


def conll_string(sentences: Iterable[Sentence], columns: Sequence[str] = DEFAULT_COLUMNS) -> str:
    import io

    buf = io.StringIO()
    write_conll(sentences, buf, columns)
    return buf.getvalue()
