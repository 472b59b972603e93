"""Multinomial logistic regression over hashed features.

The joint feature map phi(x, y) is realized as one weight row per label
over a shared hashed space, so a label's score is the sum of its weights
at the active indices of the context.
"""

from __future__ import annotations

import enum
import io
import logging
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import NE, Sentence, reverse_sentence
from .features import (
    DEFAULT_DIM,
    FeatureConfig,
    extract,
    gold_history,
    hash_features,
)
from .optimizer import OptimizerConfig, minimize
from .tokregex import PatternSet, annotate

log = logging.getLogger(__name__)

IOB2_LABELS = ("O", "B-PER", "I-PER", "B-LOC", "I-LOC", "B-ORG", "I-ORG", "B-MISC", "I-MISC")

MAGIC = b"VNER"
FORMAT_VERSION = 1
# stored in place of a pattern fingerprint when the regexp feature group is off
NO_REGEXP_FINGERPRINT = "-"


class Direction(enum.IntEnum):
    FORWARD = 0
    BACKWARD = 1


class ModelFormatError(ValueError):
    pass


class LabelSet:
    def __init__(self, labels: Sequence[str] = IOB2_LABELS):
        self.labels = tuple(labels)
        if "O" not in self.labels:
            raise ValueError("label set must contain 'O'")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        self.index = {t: i for i, t in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def __eq__(self, other):
        return isinstance(other, LabelSet) and self.labels == other.labels

    def __repr__(self):
        return f"LabelSet({list(self.labels)})"


@dataclass(frozen=True)
class TrainingConfig:
    lam: float = 1e-6
    optimizer: OptimizerConfig = OptimizerConfig()
    dim: int = DEFAULT_DIM
    features: FeatureConfig = FeatureConfig()

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.dim <= 0 or self.dim & (self.dim - 1):
            raise ValueError("dim must be a power of two")


@dataclass(eq=False)
class Model:
    labels: LabelSet
    weights: np.ndarray  # (K, D)
    direction: Direction = Direction.FORWARD
    fingerprint: str = ""
    patterns: PatternSet | None = field(default=None, repr=False)
    trace: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if self.weights.shape[0] != len(self.labels):
            raise ValueError("weight rows must match the label count")
        self._by_feature = None

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    @property
    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(regexp=self.fingerprint != NO_REGEXP_FINGERPRINT)

    def by_feature(self) -> np.ndarray:
        """Weights laid out (D, K) for fast gathering of feature rows."""
        if self._by_feature is None:
            self._by_feature = np.ascontiguousarray(self.weights.T)
        return self._by_feature

    def scores(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size and (indices.max() >= self.dim or indices.min() < 0):
            raise IndexError(f"feature index out of range [0, {self.dim})")
        return self.by_feature()[indices].sum(axis=0)

    def same_weights(self, other: "Model") -> bool:
        return self.weights.shape == other.weights.shape and np.array_equal(self.weights, other.weights)


def softmax(scores: np.ndarray) -> np.ndarray:
    z = np.exp(scores - scores.max(axis=-1, keepdims=True))
    return z / z.sum(axis=-1, keepdims=True)


def log_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def predict_distribution(model: Model, indices: np.ndarray) -> np.ndarray:
    return softmax(model.scores(indices))


class _Objective:
    """Regularized negative log-likelihood over a sparse binary design matrix."""

    def __init__(self, rows: Sequence[np.ndarray], gold: np.ndarray, num_labels: int, num_cols: int, lam: float):
        lengths = [len(r) for r in rows]
        indptr = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
        cols = np.concatenate(rows).astype(np.int64) if rows else np.zeros(0, np.int64)
        self.X = sp.csr_matrix((np.ones(len(cols)), cols, indptr), shape=(len(rows), num_cols))
        self.XT = self.X.T.tocsr()
        self.gold = np.asarray(gold, dtype=np.int64)
        self.K = num_labels
        self.cols = num_cols
        self.lam = lam
        self.onehot = np.zeros((len(rows), num_labels))
        self.onehot[np.arange(len(rows)), self.gold] = 1.0

    def __call__(self, flat: np.ndarray) -> tuple[float, np.ndarray]:
        W = flat.reshape(self.K, self.cols)
        scores = self.X @ W.T  # (N, K)
        logp = log_softmax(scores)
        n = len(self.gold)
        value = -logp[np.arange(n), self.gold].sum() + 0.5 * self.lam * flat.dot(flat)
        resid = np.exp(logp) - self.onehot
        grad = (self.XT @ resid).T + self.lam * W
        return float(value), np.ascontiguousarray(grad).ravel()


def objective(
    dataset: Sequence[tuple[np.ndarray, int]],
    lam: float,
    weights: np.ndarray,
) -> tuple[float, np.ndarray]:
    """Regularized negative log-likelihood and its gradient (shaped like ``weights``)."""
    K, D = weights.shape
    rows = [np.asarray(x, dtype=np.int64) for x, _ in dataset]
    gold = np.array([y for _, y in dataset], dtype=np.int64)
    if gold.size and (gold.min() < 0 or gold.max() >= K):
        raise ValueError("gold label index out of range")
    value, grad = _Objective(rows, gold, K, D, lam)(np.asarray(weights, dtype=np.float64).ravel())
    return value, grad.reshape(K, D)


def prepare(sentence: Sentence, direction: Direction, patterns: PatternSet | None) -> Sentence:
    """Orient a sentence for a model and add regexp types in that orientation."""
    if direction == Direction.BACKWARD:
        sentence = reverse_sentence(sentence)
    if patterns is not None:
        sentence = annotate(patterns, sentence)
    return sentence


def training_examples(
    corpus: Sequence[Sentence],
    labels: LabelSet,
    direction: Direction,
    patterns: PatternSet | None,
    config: TrainingConfig,
) -> tuple[list[np.ndarray], np.ndarray]:
    rows, gold = [], []
    for sentence in corpus:
        if not sentence.has(NE):
            raise ValueError("training sentences must carry NE tags")
        s = prepare(sentence, direction, patterns)
        tags = s.tags
        for j in range(len(s)):
            prev1, prev2 = gold_history(tags, j)
            rows.append(hash_features(extract(s, j, prev1, prev2, config.features), config.dim))
            gold.append(labels.index[tags[j]])
    return rows, np.array(gold, dtype=np.int64)


def train(
    corpus: Sequence[Sentence],
    patterns: PatternSet | None,
    config: TrainingConfig = TrainingConfig(),
    direction: Direction = Direction.FORWARD,
    labels: LabelSet | None = None,
    callback: Callable[[int, float], None] | None = None,
) -> Model:
    """Fit a conditional Markov model conditioned on gold previous tags."""
    if not corpus:
        raise ValueError("cannot train on an empty corpus")
    labels = labels or LabelSet()
    use_patterns = patterns if config.features.regexp else None
    rows, gold = training_examples(corpus, labels, direction, use_patterns, config)

    # Columns never active have zero gradient and stay at zero from the zero start,
    # so the search runs over the active columns only.
    active = np.unique(np.concatenate(rows))
    compact = [np.searchsorted(active, r) for r in rows]
    K = len(labels)
    fun = _Objective(compact, gold, K, len(active), config.lam)
    log.info("training %s model: %d examples, %d active features", direction.name, len(gold), len(active))
    result = minimize(fun, np.zeros(K * len(active)), config.optimizer, callback)

    weights = np.zeros((K, config.dim))
    weights[:, active] = result.x.reshape(K, len(active))
    if config.features.regexp:
        fingerprint = patterns.fingerprint if patterns is not None else ""
    else:
        fingerprint = NO_REGEXP_FINGERPRINT
    return Model(labels, weights, direction, fingerprint, use_patterns, list(result.trace))


# -- serialization ------------------------------------------------------------


def _pack_str(s: str) -> bytes:
    b = s.encode("utf-8")
    return struct.pack("<H", len(b)) + b


def save_model(model: Model, sink: str | Path | BinaryIO) -> None:
    """Binary layout: magic, u16 version, u8 direction, u32 D, u16 K,
    K length-prefixed labels, length-prefixed fingerprint, K*D <f8 weights."""
    parts = [
        MAGIC,
        struct.pack("<HBIH", FORMAT_VERSION, int(model.direction), model.dim, len(model.labels)),
    ]
    parts.extend(_pack_str(t) for t in model.labels)
    parts.append(_pack_str(model.fingerprint))
    parts.append(model.weights.astype("<f8").tobytes())
    data = b"".join(parts)
    if isinstance(sink, (str, Path)):
        Path(sink).write_bytes(data)
    else:
        sink.write(data)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ModelFormatError(f"truncated model file (needed {n} bytes at offset {self.pos})")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def string(self) -> str:
        (n,) = self.unpack("<H")
        try:
            return self.take(n).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelFormatError(f"bad string in model header: {e}") from None


def load_model(source: str | Path | BinaryIO, patterns: PatternSet | None = None) -> Model:
    """Read a model; ``patterns`` is attached after a fingerprint check."""
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    else:
        data = source.read()
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise ModelFormatError("not a model file (bad magic)")
    version, direction, dim, k = r.unpack("<HBIH")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version}")
    if direction not in (0, 1):
        raise ModelFormatError(f"bad direction byte {direction}")
    labels = LabelSet([r.string() for _ in range(k)])
    fingerprint = r.string()
    weights = np.frombuffer(r.take(8 * k * dim), dtype="<f8").reshape(k, dim).astype(np.float64)
    if r.pos != len(data):
        raise ModelFormatError(f"{len(data) - r.pos} trailing bytes after weights")
    model = Model(labels, weights, Direction(direction), fingerprint)
    if patterns is not None and fingerprint != NO_REGEXP_FINGERPRINT:
        if patterns.fingerprint != fingerprint:
            warnings.warn(
                f"pattern set fingerprint {patterns.fingerprint} differs from the model's {fingerprint}",
                stacklevel=2,
            )
        model.patterns = patterns
    return model


def model_bytes(model: Model) -> bytes:
    buf = io.BytesIO()
    save_model(model, buf)
    return buf.getvalue()
