"""
Phrase-level evaluation
=======================

Entities count as correct only when both boundaries and the type match.
Precision, recall and F1 are micro-averaged over all phrases, as in the
CoNLL shared-task script, and token accuracy is reported alongside.
"""

from pathlib import Path

from vner import Sentence, evaluate, read_conll

# a one-of-two case: precision = recall = F1 = 50
gold = [Sentence.from_columns(["Lê", "ở", "Huế"], NE=["B-PER", "O", "B-LOC"])]
pred = [Sentence.from_columns(["Lê", "ở", "Huế"], NE=["B-PER", "O", "B-ORG"])]
print(evaluate(gold, pred).format_table())

# a boundary error is a miss and a false alarm at once
pred = [Sentence.from_columns(["Lê", "ở", "Huế"], NE=["B-PER", "I-PER", "B-LOC"])]
print(evaluate(gold, pred).format_table())

# the hand-counted ten sentence fixture from the test suite
data = Path(__file__).resolve().parent.parent / "tests" / "data"
with open(data / "eval_gold.conll", encoding="utf-8") as f:
    gold = read_conll(f)
with open(data / "eval_pred.conll", encoding="utf-8") as f:
    pred = read_conll(f)
report = evaluate(gold, pred)
print(report.format_table())
print(report.format_kv())
