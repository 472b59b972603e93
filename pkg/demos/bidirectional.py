"""
Forward, backward and combined decoding
=======================================

A backward model is the same learner trained on reversed sentences. The
two decodes disagree mostly on entity boundaries; the combiner keeps, for
each entity type, the direction the policy prefers and falls back to the
span score.
"""

from vner import (
    DecodeConfig,
    Direction,
    TrainingConfig,
    combine,
    decode_both,
    default_patterns,
    default_policy,
    evaluate,
    train,
)
from vner.combiner import CombinePolicy, combine_spans
from vner.corpus import EntitySpan
from vner.features import FeatureConfig
from vner.synthetic import train_test_split

train_set, test_set = train_test_split(500, 100, seed=2017)
patterns = default_patterns()

# small worked example of the merge rule
fw = [EntitySpan(0, 2, "ORG", -0.2)]
bw = [EntitySpan(1, 2, "LOC", -0.1)]
policy = CombinePolicy({"ORG": "FORWARD", "LOC": "BACKWARD"})
print("both spans match their preferred direction, score decides:", combine_spans(fw, bw, policy))

# without the regexp features the two directions differ, which makes the
# comparison more interesting than on the full model
cfg = TrainingConfig(features=FeatureConfig(regexp=False))
forward = train(train_set, patterns, cfg, Direction.FORWARD)
backward = train(train_set, patterns, cfg, Direction.BACKWARD)

pairs = [decode_both(forward, backward, s, DecodeConfig()) for s in test_set]
for name, pred in [
    ("forward", [f.sentence for f, _ in pairs]),
    ("backward", [b.sentence for _, b in pairs]),
    ("combined", [combine(f, b, default_policy()) for f, b in pairs]),
    ("combined, backward for ORG", [combine(f, b, CombinePolicy({"ORG": "BACKWARD"})) for f, b in pairs]),
]:
    r = evaluate(test_set, pred)
    print(f"{name:28s} F1 {r.overall.f1:6.2f}  ORG {r.per_type['ORG'].f1:6.2f}")

# one sentence where the directions disagree
for s, (f, b) in zip(test_set, pairs):
    if f.tags != b.tags:
        print(" ".join(s.words))
        print("forward ", f.tags)
        print("backward", b.tags)
        print("gold    ", s.tags)
        break
