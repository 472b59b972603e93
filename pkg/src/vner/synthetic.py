"""Synthetic Vietnamese-like NER corpus built from the default lexicons.

Sentences interleave short filler phrases with entity templates:

* ``ông|bà <Person>``                  -> PER on the name
* ``tại <Place>``                      -> LOC on the name
* ``<province word> <Place>``          -> LOC over both tokens
* ``<ACRONYM> <province word> <Place>`` -> ORG over all three tokens
* ``<press word> <Title>``             -> ORG over both tokens
* ``<press word> <lowercase word>``    -> no entity (e.g. "báo tin_tức")
* ``tiếng <Language>``                 -> MISC on the language

All nominal tokens, names included, carry POS ``N``, so whether a press
word opens an organization is visible only from the shape of the next
word. Names are drawn fresh from random syllables, so test names are
mostly unseen in training.
"""

from __future__ import annotations

import random
from typing import Sequence

from .corpus import Sentence, Token

PRESS = ("báo", "tờ", "tạp_chí", "đài", "thông_tấn_xã")
PROVINCE = ("tỉnh", "thành_phố", "quận", "huyện", "xã")
ACRONYMS = ("UBND", "HĐND", "MTTQ", "BCH", "TAND")
LANGUAGES = ("Anh", "Pháp", "Việt", "Nhật", "Đức", "Nga", "Hàn", "Lào")
LOWER_SYLLABLES = (
    "tin tức cáo giấy động hiệu mạng điện thời sự chính trị xã hội văn hóa thể thao "
    "công nghệ giáo dục pháp luật"
).split()
SYLLABLES = (
    "An Bình Cường Dũng Đức Giang Hà Hải Hoàng Hùng Hương Khánh Lan Linh Long Mai "
    "Minh Nam Ngọc Nguyên Phong Phúc Quang Sơn Tâm Thanh Thảo Thủy Trang Trung Tuấn "
    "Vân Việt Xuân Yên Đông Tây Bắc Châu Lâm"
).split()
SURNAMES = "Nguyễn Trần Lê Phạm Hoàng Phan Vũ Đặng Bùi Đỗ Hồ Ngô".split()

FILLER = (
    ("người", "N"), ("dân", "N"), ("cho", "E"), ("biết", "V"), ("hôm_nay", "N"),
    ("đã", "R"), ("đến", "V"), ("họp", "V"), ("với", "E"), ("về", "E"),
    ("vấn_đề", "N"), ("kinh_tế", "N"), ("mới", "A"), ("lớn", "A"), ("và", "C"),
    ("các", "L"), ("cán_bộ", "N"), ("năm", "N"), ("nay", "P"), ("đang", "R"),
    ("làm_việc", "V"), ("thăm", "V"), ("học", "V"), ("nói", "V"), ("rằng", "C"),
)
_CHUNK_OF_POS = {"N": "NP", "V": "VP", "A": "AP", "E": "PP", "R": "VP", "C": "O", "L": "NP", "P": "NP"}


def _name(rng: random.Random, lo: int = 2, hi: int = 3) -> str:
    return "_".join(rng.choice(SYLLABLES) for _ in range(rng.randint(lo, hi)))


def _person(rng: random.Random) -> str:
    return rng.choice(SURNAMES) + "_" + _name(rng, 1, 2)


def _np(words: Sequence[str], tags: Sequence[str], pos: Sequence[str] | None = None):
    pos = pos or ["N"] * len(words)
    chunks = ["B-NP"] + ["I-NP"] * (len(words) - 1)
    return list(zip(words, pos, chunks, tags))


def _template(rng: random.Random, kind: str):
    if kind == "per":
        return _np(["ông" if rng.random() < 0.5 else "bà", _person(rng)], ["O", "B-PER"])
    if kind == "loc_bare":
        return [("tại", "E", "B-PP", "O")] + _np([_name(rng)], ["B-LOC"])
    if kind == "loc_admin":
        return _np([rng.choice(PROVINCE), _name(rng)], ["B-LOC", "I-LOC"])
    if kind == "org_admin":
        words = [rng.choice(ACRONYMS), rng.choice(PROVINCE), _name(rng)]
        return _np(words, ["B-ORG", "I-ORG", "I-ORG"])
    if kind == "org_press":
        return _np([rng.choice(PRESS), _name(rng)], ["B-ORG", "I-ORG"])
    if kind == "press_noun":
        noun = "_".join(rng.choice(LOWER_SYLLABLES) for _ in range(rng.randint(2, 3)))
        return _np([rng.choice(PRESS), noun], ["O", "O"])
    if kind == "misc":
        return _np(["tiếng", rng.choice(LANGUAGES)], ["O", "B-MISC"])
    raise ValueError(kind)


TEMPLATE_WEIGHTS = {
    "per": 3,
    "loc_bare": 2,
    "loc_admin": 3,
    "org_admin": 1,
    "org_press": 3,
    "press_noun": 3,
    "misc": 1,
}


def _filler(rng: random.Random):
    out = []
    for _ in range(rng.randint(1, 3)):
        word, pos = rng.choice(FILLER)
        out.append((word, pos, "B-" + _CHUNK_OF_POS[pos] if _CHUNK_OF_POS[pos] != "O" else "O", "O"))
    return out


def generate_sentence(rng: random.Random) -> Sentence:
    kinds = list(TEMPLATE_WEIGHTS)
    weights = [TEMPLATE_WEIGHTS[k] for k in kinds]
    rows = []
    for _ in range(rng.randint(1, 3)):
        rows += _filler(rng)
        rows += _template(rng, rng.choices(kinds, weights)[0])
    rows += _filler(rng) if rng.random() < 0.5 else []
    rows.append((".", "CH", "O", "O"))
    return Sentence(tuple(Token(w, {"POS": p, "CHUNK": c, "NE": t}) for w, p, c, t in rows))


def generate_corpus(n: int, seed: int = 0) -> list[Sentence]:
    rng = random.Random(seed)
    return [generate_sentence(rng) for _ in range(n)]


def train_test_split(n_train: int = 500, n_test: int = 100, seed: int = 2017) -> tuple[list[Sentence], list[Sentence]]:
    return generate_corpus(n_train, seed), generate_corpus(n_test, seed + 1)
