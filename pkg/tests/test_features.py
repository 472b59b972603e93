from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DATA, make_sentence, sentences
from vner.corpus import Sentence, Token
from vner.features import (
    FeatureConfig,
    FeatureError,
    extract,
    fnv1a_64,
    gold_history,
    hash_features,
    hash_index,
    static_features,
)


@pytest.fixture
def fixture_sentence():
    return Sentence(
        (
            Token("tỉnh", {"POS": "N", "CHUNK": "B-NP", "REGEXP": "LOC_ADMIN"}),
            Token("Quảng_Ninh", {"POS": "Np", "CHUNK": "I-NP", "REGEXP": "LOC_ADMIN"}),
            Token(".", {"POS": "CH", "CHUNK": "O", "REGEXP": "NA"}),
        )
    )


def load_golden():
    golden = {}
    for line in (DATA / "features_golden.txt").read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            continue
        pos, feat = line.split("\t")
        golden.setdefault(int(pos), []).append(feat)
    return golden


def test_golden_inventory(fixture_sentence):
    tags = ["B-LOC", "I-LOC", "O"]
    golden = load_golden()
    for j in range(3):
        got = extract(fixture_sentence, j, *gold_history(tags, j))
        assert Counter(got) == Counter(golden[j]), j
    assert sum(len(v) for v in golden.values()) > 30


def test_position_zero_has_bos_padding(fixture_sentence):
    feats = extract(fixture_sentence, 0)
    assert "t-1=BOS" in feats and "w-1=BOS" in feats and "t-2=BOS" in feats


def test_missing_regexp_is_na():
    s = make_sentence(["tỉnh", "Quảng_Ninh"])
    assert "r0=NA" in extract(s, 0)


def test_missing_pos_names_key():
    s = Sentence((Token("a", {"CHUNK": "O"}),))
    with pytest.raises(FeatureError, match="POS"):
        extract(s, 0)
    s = Sentence((Token("a", {"POS": "N"}),))
    with pytest.raises(FeatureError, match="CHUNK"):
        extract(s, 0)


def test_sentinel_words_are_escaped():
    s = make_sentence(["BOS", "EOS"])
    feats = extract(s, 0)
    assert "w0=\\BOS" in feats and "w+1=\\EOS" in feats
    assert "w-1=BOS" in feats


def test_regexp_group_can_be_disabled(fixture_sentence):
    feats = static_features(fixture_sentence, 1, FeatureConfig(regexp=False))
    assert not any(f.startswith(("r0", "r-1", "r+1", "w0+r", "p0+r")) for f in feats)


def test_history_must_be_bos_at_start(fixture_sentence):
    with pytest.raises(ValueError):
        extract(fixture_sentence, 0, "O", "BOS")
    with pytest.raises(ValueError):
        extract(fixture_sentence, 1, "O", "O")


@given(sentences(), st.data())
def test_non_boolean_count_is_position_independent(s, data):
    j = data.draw(st.integers(0, len(s) - 1))
    feats = extract(s, j)
    assert len([f for f in feats if not f.startswith("s0.")]) == 27


# -- hashing ------------------------------------------------------------------


def test_fnv1a_reference_vectors():
    assert fnv1a_64(b"") == 0xCBF29CE484222325
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"foobar") == 0x85944171F73967E8


def test_pinned_index():
    assert hash_index("w0=tỉnh", 1 << 18) == 112196
    assert hash_index("w0=tỉnh", 1 << 10) == 580


def test_hash_features_basics():
    assert hash_features([]).size == 0
    assert hash_features(["a", "a"]).tolist() == [hash_index("a")]
    with pytest.raises(ValueError):
        hash_features(["a"], 1000)


@given(st.lists(st.text(max_size=10), max_size=40), st.sampled_from([2, 64, 1 << 10, 1 << 18]))
def test_hash_vector_sorted_unique_in_range(feats, dim):
    v = hash_features(feats, dim)
    assert np.all(np.diff(v) > 0)
    assert v.size == 0 or (v.min() >= 0 and v.max() < dim)
    assert np.array_equal(v, hash_features(list(reversed(feats)), dim))
