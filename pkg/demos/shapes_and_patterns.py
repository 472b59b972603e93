"""
Word shapes and token patterns
==============================

Every token gets a set of shape predicates and one canonical shape. Token
patterns are short sequences of predicates; the annotator tags each token
with the type of the pattern that covers it, longest match first.
"""

from vner import canonical_shape, default_patterns, shape_predicates
from vner.corpus import Sentence
from vner.tokregex import annotate, find_all_matches

# shapes of some typical words
for word in ["tỉnh", "Tổng_cục", "UBND", "iPhone", "H.", "A9", "H-P", "100", "20-10-1980", "21B", "Hà_Nội"]:
    preds = sorted(s.name for s in shape_predicates(word))
    print(f"{word:12s} {canonical_shape(word).name:12s} {', '.join(preds)}")

# the shipped pattern set, in its own file format
patterns = default_patterns()
print()
print(patterns.to_text())

# "UBND tỉnh Đồng_Nai" matches two patterns; the longer one wins
words = ["UBND", "tỉnh", "Đồng_Nai"]
for m in find_all_matches(patterns, words):
    print(m.pattern, words[m.start : m.end + 1])

# annotation adds a REGEXP column, NA where nothing matched
words = ["báo", "Tuổi_Trẻ", "đưa", "tin", "UBND", "tỉnh", "Đồng_Nai", "họp", "."]
s = annotate(patterns, Sentence.from_columns(words))
print()
for w, r in zip(s.words, s.column("REGEXP")):
    print(f"{w:10s} {r}")
