"""Greedy and Viterbi inference for the conditional Markov model.

Tags are inferred in the model's own direction: a backward model decodes
the reversed sentence and the result is reversed back with IOB2 repair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import NE, Sentence, reverse_sentence, split_tag
from .features import BOS, hash_features, history_features, static_features
from .model import Direction, LabelSet, Model, log_softmax, prepare


class Mode(str, enum.Enum):
    GREEDY = "greedy"
    VITERBI = "viterbi"


@dataclass(frozen=True)
class DecodeConfig:
    mode: Mode = Mode.GREEDY
    beam: int | None = None
    enforce_iob2: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.beam is not None and self.beam < 1:
            raise ValueError("beam width must be >= 1")


@dataclass(frozen=True)
class Tagging:
    """A decoded sentence with the log-probability of each chosen tag."""

    sentence: Sentence
    logprobs: tuple[float, ...]
    direction: Direction = Direction.FORWARD

    @property
    def tags(self) -> list[str]:
        return self.sentence.tags

    @property
    def score(self) -> float:
        return float(sum(self.logprobs))


def transition_mask(labels: LabelSet) -> np.ndarray:
    """``allowed[p, y]`` for previous label ``p`` (index K means BOS)."""
    K = len(labels)
    allowed = np.ones((K + 1, K), dtype=bool)
    for y, tag in enumerate(labels):
        prefix, typ = split_tag(tag)
        if prefix != "I":
            continue
        for p in range(K + 1):
            prev = labels[p] if p < K else BOS
            allowed[p, y] = split_tag(prev)[1] == typ if prev != BOS else False
    return allowed


class _Lattice:
    """Log-probabilities ``lp[j][p1, p2, y]`` of one oriented sentence.

    History index K stands for BOS. Feature sets are deduplicated exactly as
    ``hash_features`` would, including collisions between history and
    static features.
    """

    def __init__(self, model: Model, sentence: Sentence):
        self.model = model
        self.sentence = sentence
        self.K = len(model.labels)
        self.hist = list(model.labels) + [BOS]
        self.cfg = model.feature_config

    def position(self, j: int, p1_only: int | None = None, p2_only: int | None = None) -> np.ndarray:
        """``lp[p1, p2, y]``; entries outside the requested histories are -inf."""
        K, dim, W = self.K, self.model.dim, self.model.by_feature()
        static = hash_features(static_features(self.sentence, j, self.cfg), dim)
        base = W[static].sum(axis=0)
        static_set = set(static.tolist())
        p1_range = [p1_only] if p1_only is not None else (range(K) if j >= 1 else [K])
        p2_range = [p2_only] if p2_only is not None else (range(K) if j >= 2 else [K])

        out = np.full((K + 1, K + 1, K), -np.inf)
        t2 = {}
        for p2 in p2_range:
            t2[p2] = {int(i) for i in hash_features([f"t-2={self.hist[p2]}"], dim)} - static_set
        for p1 in p1_range:
            t1_feats = history_features(self.sentence, j, self.hist[p1], BOS)
            t1 = {int(i) for i in hash_features([t1_feats[0], t1_feats[2]], dim)} - static_set
            s1 = base + (W[sorted(t1)].sum(axis=0) if t1 else 0.0)
            for p2 in p2_range:
                extra = t2[p2] - t1
                scores = s1 + (W[sorted(extra)].sum(axis=0) if extra else 0.0)
                out[p1, p2] = log_softmax(scores)
        return out


def _greedy(lat: _Lattice, n: int, allowed: np.ndarray | None) -> tuple[list[int], list[float]]:
    K = lat.K
    path, lps = [], []
    for j in range(n):
        p1 = path[j - 1] if j >= 1 else K
        p2 = path[j - 2] if j >= 2 else K
        lp = lat.position(j, p1, p2)[p1, p2]
        cand = lp if allowed is None else np.where(allowed[p1], lp, -np.inf)
        y = int(np.argmax(cand))
        path.append(y)
        lps.append(float(lp[y]))
    return path, lps


def _viterbi(lat: _Lattice, n: int, allowed: np.ndarray | None, beam: int | None) -> tuple[list[int], list[float]]:
    K = lat.K
    # delta[p, y]: best score of a prefix ending in (tag_{j-1}=p, tag_j=y); p = K is BOS
    lp0 = lat.position(0)
    delta = np.full((K + 1, K), -np.inf)
    delta[K] = lp0[K, K] if allowed is None else np.where(allowed[K], lp0[K, K], -np.inf)
    back: list[np.ndarray] = []
    lps_table = [lp0]
    for j in range(1, n):
        lp = lat.position(j)  # [p1, p2, y]
        # cand[p1, p2, y] = delta[p2, p1] + lp[p1, p2, y]
        prev = delta.T  # (K, K+1): [p1, p2]
        cand = prev[:, :, None] + lp[:K, :, :]
        if allowed is not None:
            cand = np.where(allowed[:K, None, :], cand, -np.inf)
        best_p2 = np.argmax(cand, axis=1)  # (K, K) first index wins ties
        new = np.take_along_axis(cand, best_p2[:, None, :], axis=1)[:, 0, :]
        delta = np.full((K + 1, K), -np.inf)
        delta[:K] = new
        if beam is not None:
            flat = delta.ravel()
            order = np.argsort(-flat, kind="stable")
            flat[order[beam:]] = -np.inf
        back.append(best_p2)
        lps_table.append(lp)

    flat_best = int(np.argmax(delta.ravel()))
    p, y = divmod(flat_best, K)
    path = [y]
    if n > 1:
        path.append(p)
        for j in range(n - 1, 1, -1):
            y_j, p_j = path[-2], path[-1]
            path.append(int(back[j - 1][p_j, y_j]))
        path.reverse()
    lps = []
    for j, y in enumerate(path):
        p1 = path[j - 1] if j >= 1 else K
        p2 = path[j - 2] if j >= 2 else K
        lps.append(float(lps_table[j][p1, p2, y]))
    return path, lps


def decode_oriented(model: Model, sentence: Sentence, config: DecodeConfig = DecodeConfig()) -> tuple[list[str], list[float]]:
    """Decode a sentence already in the model's orientation and annotated."""
    n = len(sentence)
    if n == 0:
        return [], []
    lat = _Lattice(model, sentence)
    allowed = transition_mask(model.labels) if config.enforce_iob2 else None
    if config.mode == Mode.GREEDY:
        path, lps = _greedy(lat, n, allowed)
    else:
        path, lps = _viterbi(lat, n, allowed, config.beam)
    return [model.labels[i] for i in path], lps


def decode(model: Model, sentence: Sentence, config: DecodeConfig = DecodeConfig()) -> Tagging:
    """Tag a sentence; the input is not modified."""
    oriented = prepare(sentence.without(NE), model.direction, model.patterns)
    tags, lps = decode_oriented(model, oriented, config)
    tagged = oriented.with_tags(tags) if tags else oriented
    if model.direction == Direction.BACKWARD:
        tagged = reverse_sentence(tagged)
        lps = lps[::-1]
    return Tagging(tagged, tuple(lps), model.direction)


def decode_both(
    forward: Model,
    backward: Model,
    sentence: Sentence,
    config: DecodeConfig = DecodeConfig(),
) -> tuple[Tagging, Tagging]:
    if forward.labels != backward.labels:
        raise ValueError("forward and backward models have different label sets")
    if forward.fingerprint != backward.fingerprint:
        raise ValueError("forward and backward models were trained with different pattern sets")
    return decode(forward, sentence, config), decode(backward, sentence, config)


def sequence_score(model: Model, sentence: Sentence, tags: Sequence[str]) -> float:
    """Sum of per-position log-probabilities of ``tags`` on an oriented sentence."""
    lat = _Lattice(model, sentence)
    K = lat.K
    idx = [model.labels.index[t] for t in tags]
    total = 0.0
    for j, y in enumerate(idx):
        p1 = idx[j - 1] if j >= 1 else K
        p2 = idx[j - 2] if j >= 2 else K
        total += lat.position(j, p1, p2)[p1, p2, y]
    return float(total)
