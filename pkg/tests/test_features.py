import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.feature_extraction.text import TfidfVectorizer as SkTfidf

from sentimen.exceptions import ConfigError, DataError
from sentimen.features import (
    PAD,
    PAD_ID,
    UNK,
    UNK_ID,
    TfIdfModel,
    TfidfVectorizer,
    Vocabulary,
    build_vocab,
    compute_percentile_length,
    encode_batch,
    encode_sequence,
    fit_tfidf,
    transform_corpus,
    transform_tfidf,
)

docs_strategy = st.lists(st.lists(st.sampled_from("abcdefghij"), max_size=8), min_size=1, max_size=15)


# --- vocabulary

def test_vocab_min_freq():
    v = build_vocab([["a", "b"], ["a"]], min_freq=2)
    assert v.tokens == [PAD, UNK, "a"]
    assert v.id_of("b") == UNK_ID and v.id_of("a") == 2


@given(docs_strategy)
def test_vocab_size_min_freq_one(docs):
    v = build_vocab(docs, min_freq=1)
    assert len(v) == len({t for d in docs for t in d}) + 2


def test_vocab_order_and_roundtrip(tmp_path):
    v = build_vocab([["b", "a", "c"], ["c", "b"], ["c"]], min_freq=1)
    assert v.tokens == [PAD, UNK, "c", "b", "a"]
    assert v.counts == [0, 0, 3, 2, 1]
    v.save(tmp_path / "v.json")
    assert Vocabulary.load(tmp_path / "v.json") == v
    assert build_vocab([["b", "a", "c"], ["c", "b"], ["c"]], min_freq=1) == v


def test_vocab_errors(tmp_path):
    with pytest.raises(DataError):
        build_vocab([])
    with pytest.raises(ConfigError):
        build_vocab([["a"]], min_freq=0)
    bad = build_vocab([["a"]], 1).to_dict() | {"version": 7}
    with pytest.raises(ConfigError, match="version"):
        Vocabulary.from_dict(bad)


def test_percentile():
    assert compute_percentile_length([["x"] * 4], 95) == 4
    assert compute_percentile_length([["x"] * n for n in range(1, 101)], 95) == 95
    assert compute_percentile_length([["x"] * n for n in range(1, 101)], 100) == 100
    assert compute_percentile_length([["x"] * n for n in range(1, 101)], 0.5) == 1
    with pytest.raises(DataError):
        compute_percentile_length([], 95)
    with pytest.raises(ConfigError):
        compute_percentile_length([["x"]], 0)


def test_encode_sequence():
    v = build_vocab([["a", "b"], ["a", "b"]], 2)
    assert encode_sequence([], v, 3).ids == (PAD_ID,) * 3
    assert encode_sequence([], v, 3).true_length == 0
    s = encode_sequence(["a"] * 20, v, 17)
    assert s.true_length == 17 and len(s.ids) == 17
    assert encode_sequence(["zzz-unknown"], v, 3).ids == (UNK_ID, PAD_ID, PAD_ID)
    assert v.decode(encode_sequence(["b", "a"], v, 4).ids) == ["b", "a"]
    ids, lengths = encode_batch([["a"], ["b", "a", "b", "a"]], v, 3)
    assert ids.shape == (2, 3) and ids.dtype == np.int64
    assert lengths.tolist() == [1, 3]


# --- TF-IDF

def brute_tfidf(docs, terms, n_docs, df):
    """Pure-python reference: dict of term -> weight per document."""
    out = []
    for doc in docs:
        c = Counter(t for t in doc if t in terms)
        raw = {t: c[t] * (math.log((1 + n_docs) / (1 + df[t])) + 1) for t in c}
        norm = math.sqrt(sum(w * w for w in raw.values()))
        out.append({t: w / norm for t, w in raw.items()} if norm else {})
    return out


def test_idf_examples():
    m = fit_tfidf([["a"]])
    assert m.idf.tolist() == [1.0]
    m = fit_tfidf([["a", "b"], ["a"], ["a", "c"]])
    assert m.idf[m.index["a"]] == 1.0
    assert m.idf[m.index["b"]] == pytest.approx(math.log(4 / 2) + 1, abs=1e-15)


def test_max_features_keeps_most_frequent():
    docs = [["a"] * 5 + ["b"] * 4 + ["c"] * 3 + ["d"] * 2 + ["e"]]
    assert fit_tfidf(docs, max_features=3).terms == ["a", "b", "c"]
    # frequency ties resolve lexicographically
    assert fit_tfidf([["z", "y", "x"]], max_features=2).terms == ["x", "y"]


def test_transform_examples():
    m = TfIdfModel(["a", "b", "c"], [1, 1, 1], np.ones(3), 1)
    assert transform_tfidf(["zzz"], m).indices == ()
    assert transform_tfidf(["b", "b", "b"], m).to_dense().tolist() == [0, 1.0, 0]
    v = transform_tfidf(["a", "a", "b"], m)
    np.testing.assert_allclose(v.weights, np.array([2, 1]) / math.sqrt(5), rtol=0, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(docs_strategy, st.integers(1, 12))
def test_tfidf_matches_brute_force(docs, max_features):
    m = fit_tfidf(docs, max_features)
    df = dict(zip(m.terms, m.df))
    ref = brute_tfidf(docs, set(m.terms), len(docs), df)
    X = transform_corpus(docs, m).toarray()
    for i, doc in enumerate(docs):
        expected = np.zeros(m.dimension)
        for t, w in ref[i].items():
            expected[m.index[t]] = w
        np.testing.assert_allclose(X[i], expected, rtol=0, atol=1e-12)
        np.testing.assert_allclose(transform_tfidf(doc, m).to_dense(), expected, rtol=0, atol=1e-12)
        norm = np.linalg.norm(X[i])
        assert norm == 0 or abs(norm - 1) < 1e-12


def test_tfidf_matches_sklearn():
    rng = np.random.default_rng(0)
    words = [f"w{i}" for i in range(40)]
    docs = [list(rng.choice(words, size=rng.integers(1, 12))) for _ in range(60)]
    ours = TfidfVectorizer(max_features=None).fit(docs)
    sk = SkTfidf(analyzer=lambda d: d, lowercase=False).fit(docs)
    assert list(ours.get_feature_names_out()) == list(sk.get_feature_names_out())
    np.testing.assert_allclose(ours.transform(docs).toarray(), sk.transform(docs).toarray(), rtol=0, atol=1e-12)


def test_fit_only_sees_training_docs():
    vec = TfidfVectorizer(max_features=10).fit([["a", "b"], ["b"]])
    X = vec.transform([["a", "new"], ["new"]])
    assert X.shape == (2, 2)
    assert X[1].nnz == 0
    assert "new" not in vec.vocabulary_


def test_tfidf_roundtrip(tmp_path):
    m = fit_tfidf([["a", "b", "b"], ["c"], ["a"]])
    m.save(tmp_path / "t.json")
    back = TfIdfModel.load(tmp_path / "t.json")
    assert back.terms == m.terms and back.df == m.df
    assert back.idf.tobytes() == m.idf.tobytes()
    vec = TfidfVectorizer.from_model(back)
    assert (vec.transform([["a", "c"]]) != transform_corpus([["a", "c"]], m)).nnz == 0


def test_tfidf_errors():
    with pytest.raises(DataError):
        fit_tfidf([])
    with pytest.raises(ConfigError):
        fit_tfidf([["a"]], max_features=0)
