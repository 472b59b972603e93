"""
Training and decoding a conditional Markov model
================================================

A maximum-entropy classifier is trained on every token of a synthetic
corpus, conditioned on the two previous gold tags. Decoding then runs
greedily or with Viterbi over pairs of previous tags.
"""

import time

import numpy as np

from vner import DecodeConfig, Direction, TrainingConfig, decode, default_patterns, evaluate, train
from vner.features import extract, hash_features
from vner.synthetic import train_test_split

train_set, test_set = train_test_split(500, 100, seed=2017)
patterns = default_patterns()
print(len(train_set), "training sentences, e.g.:")
print(" ".join(f"{t.word}/{t.get('NE')}" for t in train_set[0]))

# the features of one token, before and after hashing
s = train_set[0]
feats = extract(s, 1, s.tags[0], "BOS")
print(len(feats), "features at position 1:", feats[:6], "...")
print("hashed:", hash_features(feats)[:6], "...")

# train with the default settings (lambda 1e-6, tol 1e-6, D = 2^18)
t0 = time.perf_counter()
model = train(train_set, patterns, TrainingConfig(), Direction.FORWARD)
print(f"trained in {time.perf_counter() - t0:.1f}s, {len(model.trace) - 1} iterations")
print("objective trace:", np.round(model.trace[:5], 2), "...", round(model.trace[-1], 4))
print("nonzero weights:", np.count_nonzero(model.weights))

# decode one held-out sentence both ways
s = test_set[3]
for mode in ("greedy", "viterbi"):
    tagging = decode(model, s, DecodeConfig(mode))
    print(mode, tagging.tags, f"log-prob {tagging.score:.4f}")

# token accuracy and phrase F1 on the held-out set
report = evaluate(test_set, [decode(model, x).sentence for x in test_set])
print(report.format_table())
