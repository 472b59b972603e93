"""Regular expressions over tokens.

A pattern is a fixed-length sequence of token predicates. ``annotate``
marks every token with the name of the pattern covering it, choosing the
longest match first and recursing on what is left on either side.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import REGEXP, Sentence
from .shapes import Shape, shape_predicates

NO_TYPE = "NA"

LEXICON = "lexicon"
SHAPE = "shape"
COMPOUND = "any"


class PatternFileError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True)
class TokenPredicate:
    name: str
    kind: str
    words: frozenset[str] = frozenset()
    shapes: frozenset[Shape] = frozenset()
    members: tuple[str, ...] = ()


@dataclass(frozen=True)
class TokenPattern:
    name: str
    sequence: tuple[str, ...]
    priority: int

    def __len__(self):
        return len(self.sequence)


@dataclass(frozen=True)
class Match:
    pattern: str
    start: int
    end: int
    priority: int = 0

    def __len__(self):
        return self.end - self.start + 1


class PatternSet:
    """Named predicates plus an ordered list of patterns over them."""

    def __init__(self, predicates: Iterable[TokenPredicate] = (), patterns: Iterable[TokenPattern] = ()):
        self.predicates: dict[str, TokenPredicate] = {}
        for p in predicates:
            if p.name in self.predicates:
                raise ValueError(f"duplicate predicate {p.name!r}")
            if p.kind == LEXICON and not p.words:
                raise ValueError(f"lexicon predicate {p.name!r} is empty")
            self.predicates[p.name] = p
        self.patterns: tuple[TokenPattern, ...] = tuple(patterns)
        names = [p.name for p in self.patterns]
        if len(set(names)) != len(names):
            raise ValueError("duplicate pattern name")
        for pat in self.patterns:
            if not pat.sequence:
                raise ValueError(f"pattern {pat.name!r} is empty")
            for ref in pat.sequence:
                if ref not in self.predicates:
                    raise ValueError(f"pattern {pat.name!r} references unknown predicate {ref!r}")
        self._check_compounds()

    def _check_compounds(self):
        state: dict[str, int] = {}

        def visit(name, trail):
            if name not in self.predicates:
                raise ValueError(f"predicate {trail[-1]!r} references unknown predicate {name!r}")
            if state.get(name) == 1:
                raise ValueError(f"cyclic predicate reference through {name!r}")
            if state.get(name) == 2:
                return
            state[name] = 1
            for m in self.predicates[name].members:
                visit(m, trail + [name])
            state[name] = 2

        for name in self.predicates:
            visit(name, [name])

    def __len__(self):
        return len(self.patterns)

    def accepts(self, predicate: str, word: str) -> bool:
        p = self.predicates[predicate]
        if p.kind == LEXICON:
            return word in p.words or (word[:1].lower() + word[1:]) in p.words
        if p.kind == SHAPE:
            return not p.shapes.isdisjoint(shape_predicates(word))
        return any(self.accepts(m, word) for m in p.members)

    def to_text(self) -> str:
        lines = []
        for p in self.predicates.values():
            if p.kind == LEXICON:
                body = " ".join(sorted(p.words))
            elif p.kind == SHAPE:
                body = "|".join(sorted(s.value for s in p.shapes))
            else:
                body = "|".join(p.members)
            lines.append(f"predicate {p.name} {p.kind} {body}")
        for pat in self.patterns:
            lines.append(f"pattern {pat.name} {' '.join(pat.sequence)}")
        return "\n".join(lines) + "\n"

    @property
    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, PatternSet) and self.to_text() == other.to_text()

    def __repr__(self):
        return f"PatternSet({len(self.predicates)} predicates, {len(self.patterns)} patterns)"


def parse_patterns(text: str) -> PatternSet:
    predicates = []
    patterns = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "predicate":
            if len(fields) < 4:
                raise PatternFileError("predicate needs a name, a kind and a body", lineno)
            name, kind, body = fields[1], fields[2], fields[3:]
            if name in seen:
                raise PatternFileError(f"duplicate predicate {name!r}", lineno)
            seen.add(name)
            if kind == LEXICON:
                predicates.append(TokenPredicate(name, LEXICON, words=frozenset(body)))
            elif kind == SHAPE:
                try:
                    shapes = frozenset(Shape[s] for s in "".join(body).split("|") if s)
                except KeyError as e:
                    raise PatternFileError(f"unknown shape {e.args[0]!r}", lineno) from None
                predicates.append(TokenPredicate(name, SHAPE, shapes=shapes))
            elif kind == COMPOUND:
                members = tuple(m for m in "".join(body).split("|") if m)
                predicates.append(TokenPredicate(name, COMPOUND, members=members))
            else:
                raise PatternFileError(f"unknown predicate kind {kind!r}", lineno)
        elif fields[0] == "pattern":
            if len(fields) < 3:
                raise PatternFileError("pattern needs a name and at least one predicate", lineno)
            patterns.append((lineno, TokenPattern(fields[1], tuple(fields[2:]), len(patterns))))
        else:
            raise PatternFileError(f"unknown directive {fields[0]!r}", lineno)
    names = {p.name for p in predicates}
    for lineno, pat in patterns:
        for ref in pat.sequence:
            if ref not in names:
                raise PatternFileError(f"unknown predicate {ref!r}", lineno)
    try:
        return PatternSet(predicates, [p for _, p in patterns])
    except ValueError as e:
        raise PatternFileError(str(e)) from None


def load_patterns(path: str | Path) -> PatternSet:
    return parse_patterns(Path(path).read_text(encoding="utf-8"))


def default_patterns() -> PatternSet:
    text = resources.files("vner").joinpath("data/default_patterns.txt").read_text(encoding="utf-8")
    return parse_patterns(text)


def match_at(patterns: PatternSet, pattern: TokenPattern, words: Sequence[str], position: int) -> Match | None:
    end = position + len(pattern.sequence) - 1
    if position < 0 or end >= len(words):
        return None
    for pred, word in zip(pattern.sequence, words[position : end + 1]):
        if not patterns.accepts(pred, word):
            return None
    return Match(pattern.name, position, end, pattern.priority)


def _words(sentence) -> list[str]:
    return sentence.words if isinstance(sentence, Sentence) else list(sentence)


def find_all_matches(patterns: PatternSet, sentence, lo: int = 0, hi: int | None = None) -> list[Match]:
    """All matches lying fully inside ``[lo, hi]`` (inclusive).

    Ordered by start, then longest first, then pattern priority.
    """
    words = _words(sentence)
    if hi is None:
        hi = len(words) - 1
    found = []
    for pos in range(lo, hi + 1):
        for pat in patterns.patterns:
            m = match_at(patterns, pat, words, pos)
            if m is not None and m.end <= hi:
                found.append(m)
    found.sort(key=lambda m: (m.start, -len(m), m.priority))
    return found


def regexp_types(patterns: PatternSet, sentence) -> list[str]:
    """Regexp type for each token, ``"NA"`` where no pattern was selected."""
    words = _words(sentence)
    types = [NO_TYPE] * len(words)
    # a match depends only on the tokens it covers, so one global scan serves every sub-range
    matches = find_all_matches(patterns, words)
    stack = [(0, len(words) - 1)]
    while stack:
        lo, hi = stack.pop()
        if lo > hi:
            continue
        inside = [m for m in matches if m.start >= lo and m.end <= hi]
        if not inside:
            continue
        best = min(inside, key=lambda m: (-len(m), m.start, m.priority))
        for i in range(best.start, best.end + 1):
            types[i] = best.pattern
        stack.append((lo, best.start - 1))
        stack.append((best.end + 1, hi))
    return types


def annotate(patterns: PatternSet, sentence: Sentence) -> Sentence:
    return sentence.with_column(REGEXP, regexp_types(patterns, sentence))
