"""Phrase-level precision, recall and F1 in the style of conlleval."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import Sentence, extract_spans


class EvaluationError(ValueError):
    pass


def _prf(correct: int, gold: int, predicted: int) -> tuple[float, float, float]:
    p = 100.0 * correct / predicted if predicted else 0.0
    r = 100.0 * correct / gold if gold else 0.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


@dataclass(frozen=True)
class TypeScores:
    gold: int
    predicted: int
    correct: int

    @property
    def precision(self) -> float:
        return _prf(self.correct, self.gold, self.predicted)[0]

    @property
    def recall(self) -> float:
        return _prf(self.correct, self.gold, self.predicted)[1]

    @property
    def f1(self) -> float:
        return _prf(self.correct, self.gold, self.predicted)[2]


@dataclass(frozen=True)
class EvalReport:
    overall: TypeScores
    per_type: dict[str, TypeScores] = field(default_factory=dict)
    tokens: int = 0
    correct_tokens: int = 0

    @property
    def token_accuracy(self) -> float:
        return 100.0 * self.correct_tokens / self.tokens if self.tokens else 0.0

    def rows(self) -> list[tuple[str, TypeScores]]:
        return [("All", self.overall)] + sorted(self.per_type.items())

    def format_table(self) -> str:
        lines = [f"{'Type':<6}{'Precision':>11}{'Recall':>9}{'F1':>8}{'Gold':>7}{'Pred':>7}{'Correct':>9}"]
        for name, s in self.rows():
            lines.append(
                f"{name:<6}{s.precision:>10.2f}%{s.recall:>8.2f}%{s.f1:>8.2f}"
                f"{s.gold:>7d}{s.predicted:>7d}{s.correct:>9d}"
            )
        lines.append(f"token accuracy: {self.token_accuracy:.2f}% ({self.correct_tokens}/{self.tokens})")
        return "\n".join(lines) + "\n"

    def format_kv(self) -> str:
        out = []
        for name, s in self.rows():
            key = name.lower()
            out += [
                f"{key}.precision={s.precision:.2f}",
                f"{key}.recall={s.recall:.2f}",
                f"{key}.f1={s.f1:.2f}",
                f"{key}.gold={s.gold}",
                f"{key}.predicted={s.predicted}",
                f"{key}.correct={s.correct}",
            ]
        out.append(f"token_accuracy={self.token_accuracy:.2f}")
        return "\n".join(out) + "\n"


def evaluate(gold: Sequence[Sentence], predicted: Sequence[Sentence]) -> EvalReport:
    if len(gold) != len(predicted):
        raise EvaluationError(f"gold has {len(gold)} sentences, predicted has {len(predicted)}")
    n_gold, n_pred, n_correct = Counter(), Counter(), Counter()
    tokens = correct_tokens = 0
    for i, (g, p) in enumerate(zip(gold, predicted)):
        if len(g) != len(p):
            raise EvaluationError(f"sentence {i}: gold has {len(g)} tokens, predicted has {len(p)}")
        if g.words != p.words:
            raise EvaluationError(f"sentence {i}: token words differ")
        g_spans = {s.key for s in extract_spans(g)}
        p_spans = {s.key for s in extract_spans(p)}
        for _, _, label in g_spans:
            n_gold[label] += 1
        for _, _, label in p_spans:
            n_pred[label] += 1
        for _, _, label in g_spans & p_spans:
            n_correct[label] += 1
        tokens += len(g)
        correct_tokens += sum(a == b for a, b in zip(g.tags, p.tags))
    per_type = {
        t: TypeScores(n_gold[t], n_pred[t], n_correct[t]) for t in sorted(set(n_gold) | set(n_pred))
    }
    overall = TypeScores(sum(n_gold.values()), sum(n_pred.values()), sum(n_correct.values()))
    return EvalReport(overall, per_type, tokens, correct_tokens)
