"""Named entity tagging with token patterns, hashed features and two-direction decoding."""

from .combiner import CombinePolicy, combine, default_policy, load_policy
from .corpus import EntitySpan, Sentence, Token, extract_spans, read_conll, reverse_sentence, write_conll
from .decoder import DecodeConfig, Tagging, decode, decode_both
from .evaluator import EvalReport, evaluate
from .model import Direction, LabelSet, Model, TrainingConfig, load_model, save_model, train
from .shapes import Shape, canonical_shape, shape_predicates
from .tokregex import PatternSet, annotate, default_patterns, load_patterns, parse_patterns

__version__ = "0.1.0"

__all__ = [
    "CombinePolicy",
    "DecodeConfig",
    "Direction",
    "EntitySpan",
    "EvalReport",
    "LabelSet",
    "Model",
    "PatternSet",
    "Sentence",
    "Shape",
    "Tagging",
    "Token",
    "TrainingConfig",
    "annotate",
    "canonical_shape",
    "combine",
    "decode",
    "decode_both",
    "default_patterns",
    "default_policy",
    "evaluate",
    "extract_spans",
    "load_model",
    "load_patterns",
    "load_policy",
    "parse_patterns",
    "read_conll",
    "reverse_sentence",
    "save_model",
    "shape_predicates",
    "train",
    "write_conll",
]
