import random
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from vner.corpus import ENTITY_TYPES, Sentence, Token
from vner.shapes import Shape

DATA = Path(__file__).parent / "data"


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    results = item.config._acceptance.setdefault((number, title), [])
    if report.when == "call" or report.failed:
        results.append(report.passed)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcomes in sorted(results.items()):
        status = "PASS" if outcomes and all(outcomes) else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}")


# -- IOB2 helpers -------------------------------------------------------------


def conlleval_chunks(tags):
    """Chunk extraction with conlleval's start/end-of-chunk rules (oracle)."""

    def parse(t):
        return ("O", "") if t == "O" else tuple(t.split("-", 1))

    chunks = []
    prev_tag, prev_type = "O", ""
    start = None
    for i, t in enumerate(list(tags) + ["O"]):
        tag, typ = parse(t)
        end_of_chunk = prev_tag in "BI" and (tag in "BO" or prev_type != typ)
        start_of_chunk = tag == "B" or (tag == "I" and (prev_tag == "O" or prev_type != typ))
        if end_of_chunk and start is not None:
            chunks.append((start, i - 1, prev_type))
            start = None
        if start_of_chunk:
            start = i
        prev_tag, prev_type = tag, typ
    return chunks


ALL_TAGS = ["O"] + [f"{p}-{t}" for t in ENTITY_TYPES for p in "BI"]


def random_tags(rng: random.Random, n: int, p_o: float = 0.4):
    return [("O" if rng.random() < p_o else rng.choice(ALL_TAGS[1:])) for _ in range(n)]


tag_lists = st.lists(st.sampled_from(ALL_TAGS), min_size=1, max_size=15)

WORDS = ["tỉnh", "Quảng_Ninh", "UBND", "báo", "Tuổi_Trẻ", "100", "H.", "iPhone", "đến", ".", "BOS", "a|b"]
word_st = st.sampled_from(WORDS) | st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Zs", "Zl", "Zp", "Cc")), min_size=1, max_size=8
)


@st.composite
def sentences(draw, min_size=1, max_size=10):
    n = draw(st.integers(min_size, max_size))
    words = draw(st.lists(word_st, min_size=n, max_size=n))
    pos = draw(st.lists(st.sampled_from(["N", "Np", "V", "CH", "E"]), min_size=n, max_size=n))
    chunk = draw(st.lists(st.sampled_from(["B-NP", "I-NP", "B-VP", "O"]), min_size=n, max_size=n))
    tags = draw(st.lists(st.sampled_from(ALL_TAGS), min_size=n, max_size=n))
    from vner.corpus import repair_tags

    tags = repair_tags(tags)
    return Sentence(tuple(Token(w, {"POS": p, "CHUNK": c, "NE": t}) for w, p, c, t in zip(words, pos, chunk, tags)))


def make_sentence(words, pos=None, chunk=None, tags=None):
    n = len(words)
    pos = pos or ["N"] * n
    chunk = chunk or ["B-NP"] * n
    cols = {"POS": pos, "CHUNK": chunk}
    if tags is not None:
        cols["NE"] = tags
    return Sentence.from_columns(words, **cols)


# -- shape exemplars ---------------------------------------------------------

# every exemplar word, with the canonical shape it must receive
EXEMPLARS = [
    ("tỉnh", Shape.LOWER),
    ("Tổng_cục", Shape.CAPITALIZED),
    ("UBND", Shape.ALLCAPS),
    ("iPhone", Shape.MIXEDCASE),
    ("H.", Shape.CAP_PERIOD),
    ("Th.", Shape.CAP_PERIOD),
    ("U.S.", Shape.CAP_PERIOD),
    ("A9", Shape.CODE),
    ("B52", Shape.CODE),
    ("H-P", Shape.HYPHEN),
    ("100", Shape.NUMBER),
    ("20-10-1980", Shape.DATE),
    ("10/10", Shape.DATE),
    ("21B", Shape.CODE),
    ("Hà_Nội", Shape.NAME),
    ("Buôn_Mê_Thuột", Shape.NAME),
]

# the predicate each exemplar illustrates
ILLUSTRATES = [
    ("tỉnh", Shape.LOWER),
    ("Tổng_cục", Shape.CAPITALIZED),
    ("UBND", Shape.ALLCAPS),
    ("iPhone", Shape.MIXEDCASE),
    ("U.S.", Shape.CAP_PERIOD),
    ("A9", Shape.ENDS_DIGIT),
    ("B52", Shape.ENDS_DIGIT),
    ("H-P", Shape.HYPHEN),
    ("100", Shape.NUMBER),
    ("10/10", Shape.DATE),
    ("21B", Shape.CODE),
    ("Hà_Nội", Shape.NAME),
]


# -- numerical oracle ---------------------------------------------------------


def central_difference(fun, x, h=1e-6):
    """Gradient of scalar ``fun`` at ``x`` by central finite differences."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    flat = x.ravel()
    gf = g.ravel()
    for i in range(flat.size):
        e = np.zeros_like(flat)
        e[i] = h
        gf[i] = (fun((flat + e).reshape(x.shape)) - fun((flat - e).reshape(x.shape))) / (2 * h)
    return g


def relative_error(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
