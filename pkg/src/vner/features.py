"""Context features and their hashed vectorization.

Each decision at position ``j`` sees the words, POS tags, chunk tags and
regexp types in a one-token window plus the two previously assigned NE
tags. Feature strings are ``name=value``; joint values are joined with
``|``. Strings are hashed with 64-bit FNV-1a into ``[0, D)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .corpus import CHUNK, POS, REGEXP, Sentence
from .shapes import canonical_shape, shape_predicates

BOS = "BOS"
EOS = "EOS"
NA = "NA"
SENTINELS = frozenset({BOS, EOS, NA})

DEFAULT_DIM = 1 << 18

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


class FeatureError(KeyError):
    """A token lacks an annotation the feature set needs."""


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


@lru_cache(maxsize=1 << 20)
def _hash_string(s: str) -> int:
    return fnv1a_64(s.encode("utf-8"))


def hash_index(feature: str, dim: int = DEFAULT_DIM) -> int:
    return _hash_string(feature) & (dim - 1)


def hash_features(features: Sequence[str], dim: int = DEFAULT_DIM) -> np.ndarray:
    """Sorted, deduplicated hashed indices of ``features``."""
    if dim <= 0 or dim & (dim - 1):
        raise ValueError(f"dimension must be a power of two, got {dim}")
    mask = dim - 1
    return np.unique(np.fromiter((_hash_string(f) & mask for f in features), dtype=np.int64))


def escape_word(word: str) -> str:
    return "\\" + word if word in SENTINELS else word


@dataclass(frozen=True)
class FeatureConfig:
    """Which feature groups to emit. Only the regexp group can be switched off."""

    regexp: bool = True


def _required(sentence: Sentence, i: int, key: str) -> str:
    value = sentence.tokens[i].get(key)
    if value is None:
        raise FeatureError(f"token {i} ({sentence.tokens[i].word!r}) has no {key} annotation")
    return value


def static_features(sentence: Sentence, j: int, config: FeatureConfig = FeatureConfig()) -> list[str]:
    """Features of position ``j`` that do not depend on previous tags."""
    n = len(sentence)
    if not 0 <= j < n:
        raise IndexError(j)
    w0 = escape_word(sentence.tokens[j].word)
    p0 = _required(sentence, j, POS)
    c0 = _required(sentence, j, CHUNK)
    if j > 0:
        wm, pm = escape_word(sentence.tokens[j - 1].word), _required(sentence, j - 1, POS)
    else:
        wm = pm = BOS
    if j + 1 < n:
        wp, pp = escape_word(sentence.tokens[j + 1].word), _required(sentence, j + 1, POS)
    else:
        wp = pp = EOS

    feats = [
        f"w0={w0}",
        f"p0={p0}",
        f"c0={c0}",
        f"s0={canonical_shape(sentence.tokens[j].word)}",
    ]
    feats.extend(f"s0.{s}=1" for s in sorted(shape_predicates(sentence.tokens[j].word), key=lambda s: s.value))
    feats += [
        f"w-1={wm}",
        f"w0+w-1={w0}|{wm}",
        f"w+1={wp}",
        f"w0+w+1={w0}|{wp}",
        f"p-1={pm}",
        f"p0+p-1={p0}|{pm}",
        f"p+1={pp}",
        f"p0+p+1={p0}|{pp}",
        f"p-1+p+1={pm}|{pp}",
    ]
    if config.regexp:
        r0 = sentence.tokens[j].get(REGEXP, NA)
        rm = sentence.tokens[j - 1].get(REGEXP, NA) if j > 0 else BOS
        rp = sentence.tokens[j + 1].get(REGEXP, NA) if j + 1 < n else EOS
        feats += [
            f"r0={r0}",
            f"r-1={rm}",
            f"r0+r-1={r0}|{rm}",
            f"r+1={rp}",
            f"r0+r+1={r0}|{rp}",
            f"w0+r0={w0}|{r0}",
            f"w0+r-1={w0}|{rm}",
            f"w0+r+1={w0}|{rp}",
            f"p0+r0={p0}|{r0}",
            f"p0+r-1={p0}|{rm}",
            f"p0+r+1={p0}|{rp}",
        ]
    return feats


def history_features(sentence: Sentence, j: int, prev1: str, prev2: str) -> list[str]:
    """Features of position ``j`` that involve the two previous NE tags."""
    w0 = escape_word(sentence.tokens[j].word)
    return [f"t-1={prev1}", f"t-2={prev2}", f"w0+t-1={w0}|{prev1}"]


def extract(
    sentence: Sentence,
    j: int,
    prev1: str = BOS,
    prev2: str = BOS,
    config: FeatureConfig = FeatureConfig(),
) -> list[str]:
    """Full feature inventory for deciding the tag of token ``j``."""
    if j == 0 and prev1 != BOS:
        raise ValueError("prev1 must be BOS at position 0")
    if j <= 1 and prev2 != BOS:
        raise ValueError("prev2 must be BOS before position 2")
    return static_features(sentence, j, config) + history_features(sentence, j, prev1, prev2)


def gold_history(tags: Sequence[str], j: int) -> tuple[str, str]:
    prev1 = tags[j - 1] if j >= 1 else BOS
    prev2 = tags[j - 2] if j >= 2 else BOS
    return prev1, prev2
