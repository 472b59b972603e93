"""Character-level word shapes.

Underscore joins the syllables of a multi-syllable Vietnamese word
("Hà_Nội"), so it is treated as an intra-word separator, not punctuation.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from functools import lru_cache


class Shape(enum.Enum):
    LOWER = "LOWER"
    CAPITALIZED = "CAPITALIZED"
    ALLCAPS = "ALLCAPS"
    MIXEDCASE = "MIXEDCASE"
    CAP_PERIOD = "CAP_PERIOD"
    ENDS_DIGIT = "ENDS_DIGIT"
    HYPHEN = "HYPHEN"
    NUMBER = "NUMBER"
    DATE = "DATE"
    CODE = "CODE"
    NAME = "NAME"
    NONE = "NONE"

    def __str__(self):
        return self.value


PRECEDENCE = (
    Shape.DATE,
    Shape.NUMBER,
    Shape.CODE,
    Shape.CAP_PERIOD,
    Shape.ALLCAPS,
    Shape.NAME,
    Shape.MIXEDCASE,
    Shape.ENDS_DIGIT,
    Shape.HYPHEN,
    Shape.CAPITALIZED,
    Shape.LOWER,
)

_NUMBER_RE = re.compile(r"^[+-]?\d+(?:[.,]\d+)?$")
_DATE_RE = re.compile(r"^\d{1,2}[-/]\d{1,2}(?:[-/]\d{2,4})?$")


def _is_cap_syllable(s: str) -> bool:
    return s.isalpha() and s[0].isupper() and (len(s) == 1 or s[1:].islower())


def _is_cap_period(w: str) -> bool:
    if not w.endswith("."):
        return False
    groups = w[:-1].split(".")
    return all(g.isalpha() for g in groups) and groups[0][0].isupper()


def _is_code(w: str) -> bool:
    # digits then uppercase letters ("21B"), or uppercase letters then digits ("B52")
    lead = len(w) - len(w.lstrip("0123456789"))
    if 0 < lead < len(w):
        rest = w[lead:]
        return rest.isalpha() and rest.isupper()
    trail = len(w) - len(w.rstrip("0123456789"))
    if 0 < trail < len(w):
        head = w[:-trail]
        return head.isalpha() and head.isupper()
    return False


@lru_cache(maxsize=1 << 16)
def shape_predicates(word: str) -> frozenset[Shape]:
    """Every shape predicate the word satisfies (possibly none)."""
    if not word:
        raise ValueError("empty word")
    w = unicodedata.normalize("NFC", word)
    out = set()
    letters = [c for c in w if c.isalpha()]
    has_letter = bool(letters)
    has_digit = any(c.isdigit() for c in w)
    syllables = w.split("_")
    wordlike = all(s.isalpha() for s in syllables)

    if wordlike:
        if all(c.islower() for c in letters):
            out.add(Shape.LOWER)
        elif len(letters) > 1 and all(c.isupper() for c in letters):
            out.add(Shape.ALLCAPS)
        else:
            if w[0].isupper():
                out.add(Shape.CAPITALIZED)
            # uppercase somewhere other than a syllable start
            if any(c.isupper() for s in syllables for c in s[1:]) or (
                not w[0].isupper() and any(c.isupper() for c in letters)
            ):
                out.add(Shape.MIXEDCASE)
        if len(syllables) >= 2 and all(_is_cap_syllable(s) for s in syllables):
            out.add(Shape.NAME)
    if _is_cap_period(w):
        out.add(Shape.CAP_PERIOD)
    if has_letter and w[-1].isdigit():
        out.add(Shape.ENDS_DIGIT)
    if "-" in w and (has_letter or has_digit):
        out.add(Shape.HYPHEN)
    if _NUMBER_RE.match(w):
        out.add(Shape.NUMBER)
    if _DATE_RE.match(w):
        out.add(Shape.DATE)
    if has_letter and has_digit and Shape.NUMBER not in out and Shape.DATE not in out and _is_code(w):
        out.add(Shape.CODE)
    return frozenset(out)


def canonical_shape(word: str) -> Shape:
    preds = shape_predicates(word)
    for shape in PRECEDENCE:
        if shape in preds:
            return shape
    return Shape.NONE


def has_shape(word: str, shape: Shape) -> bool:
    return shape in shape_predicates(word)
