"""Entity-level merge of a forward and a backward decode.

Spans from both decodes are pooled and accepted greedily, best first,
skipping any span that overlaps one already accepted. A span ranks above
another when, in order:

1. its label prefers the direction it came from (the other does not),
2. its mean per-token log-probability is higher,
3. it is longer,
4. it starts earlier,
5. it came from the forward decode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .corpus import ENTITY_TYPES, EntitySpan, Sentence, extract_spans, tags_from_spans
from .decoder import Tagging
from .model import Direction

FORWARD = "FORWARD"
BACKWARD = "BACKWARD"
SCORE = "SCORE"
_CHOICES = (FORWARD, BACKWARD, SCORE)


class PolicyFileError(ValueError):
    pass


@dataclass(frozen=True)
class CombinePolicy:
    preferences: Mapping[str, str] = field(default_factory=dict)
    default: str = SCORE

    def __post_init__(self):
        bad = set(self.preferences) - set(ENTITY_TYPES)
        if bad:
            raise ValueError(f"unknown entity types in policy: {sorted(bad)}")
        for v in list(self.preferences.values()) + [self.default]:
            if v not in _CHOICES:
                raise ValueError(f"bad policy value {v!r}")

    def prefers(self, label: str, source: Direction) -> bool:
        return self.preferences.get(label, self.default) == source.name

    def to_text(self) -> str:
        return "".join(f"{t} {self.preferences[t]}\n" for t in ENTITY_TYPES if t in self.preferences)


def parse_policy(text: str) -> CombinePolicy:
    prefs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2 or fields[0] not in ENTITY_TYPES or fields[1] not in _CHOICES:
            raise PolicyFileError(f"line {lineno}: expected '<PER|LOC|ORG|MISC> <FORWARD|BACKWARD|SCORE>'")
        prefs[fields[0]] = fields[1]
    return CombinePolicy(prefs)


def load_policy(path: str | Path) -> CombinePolicy:
    return parse_policy(Path(path).read_text(encoding="utf-8"))


def default_policy() -> CombinePolicy:
    return parse_policy(resources.files("vner").joinpath("data/default_policy.txt").read_text(encoding="utf-8"))


def _rank(span: EntitySpan, source: Direction, policy: CombinePolicy):
    return (
        policy.prefers(span.label, source),
        span.score,
        len(span),
        -span.start,
        source == Direction.FORWARD,
    )


def combine_spans(
    forward: list[EntitySpan],
    backward: list[EntitySpan],
    policy: CombinePolicy,
) -> list[EntitySpan]:
    pool = [(s, Direction.FORWARD) for s in forward] + [(s, Direction.BACKWARD) for s in backward]
    pool.sort(key=lambda item: _rank(item[0], item[1], policy), reverse=True)
    kept: list[EntitySpan] = []
    for span, _ in pool:
        if not any(span.overlaps(k) for k in kept):
            kept.append(span)
    kept.sort(key=lambda s: s.start)
    return kept


def combine(forward: Tagging, backward: Tagging, policy: CombinePolicy | None = None) -> Sentence:
    """Merge two decodes of the same sentence into one IOB2 tagging."""
    policy = policy if policy is not None else default_policy()
    if forward.sentence.words != backward.sentence.words:
        raise ValueError("forward and backward decodes cover different token sequences")
    spans = combine_spans(
        extract_spans(forward.sentence, forward.logprobs),
        extract_spans(backward.sentence, backward.logprobs),
        policy,
    )
    return forward.sentence.with_tags(tags_from_spans(spans, len(forward.sentence)))
