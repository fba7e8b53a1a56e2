import csv

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sentimen.exceptions import ConfigError
from sentimen.preprocess import (
    ConfixStemmer,
    TextPreprocessor,
    default_resources,
    load_roots,
    load_rules,
    load_slang,
    normalize_text,
    preprocess_pipeline,
    remove_stopwords,
    replace_slang,
    stem_word,
    tokenize,
)
from sentimen.preprocess.stemmer import parse_rules

SLANG, STOPWORDS, ROOTS, RULES = default_resources()
STEMMER = ConfixStemmer(ROOTS, RULES)


def golden_pairs(data_dir):
    with open(data_dir / "stem_golden.tsv", encoding="utf-8") as fh:
        return [(r["word"], r["stem"]) for r in csv.DictReader(fh, delimiter="\t")]


# --- normalization and token filters

@pytest.mark.parametrize("raw,expected", [
    ("ABC", "abc"),
    ("@spotify Keren!!! 100%", "keren"),
    ("cek https://x.co lagu2 bagus", "cek lagu bagus"),
    ("#mantap   www.spotify.com  oke", "oke"),
    ("bagus!!!keren", "bagus keren"),
    ("", ""),
])
def test_normalize(raw, expected):
    assert normalize_text(raw) == expected


@given(st.text())
def test_normalize_is_idempotent_and_clean(raw):
    out = normalize_text(raw)
    assert normalize_text(out) == out
    assert out == out.strip() and "  " not in out
    assert all(ch.isalpha() or ch == " " for ch in out)


def test_tokenize():
    assert tokenize("keren banget") == ["keren", "banget"]
    assert tokenize("") == []
    assert tokenize("a b c") == ["a", "b", "c"]


def test_slang():
    assert len(SLANG) == 124
    assert replace_slang(["gak", "suka"], SLANG) == ["tidak", "suka"]
    assert replace_slang(["bagus"], SLANG) == ["bagus"]
    assert replace_slang(["a"], {"a": "b", "b": "c"}) == ["b"]


def test_stopwords():
    assert "yang" in STOPWORDS
    assert remove_stopwords(["lagu", "yang", "bagus"], STOPWORDS) == ["lagu", "bagus"]
    assert remove_stopwords([], STOPWORDS) == []
    assert remove_stopwords(["yang", "dan"], STOPWORDS) == []
    # negations carry sentiment and stay
    assert "tidak" not in STOPWORDS


# --- stemmer

@pytest.mark.parametrize("word,stem", [
    ("main", "main"),
    ("bermain", "main"),
    ("lagunya", "lagu"),
    ("diperbaiki", "baik"),
    ("menyanyikan", "nyanyi"),
    ("pemakaian", "pakai"),
])
def test_stem_examples(word, stem):
    assert STEMMER.stem(word) == stem
    assert stem_word(word, ROOTS, RULES) == stem


def test_unknown_word_unchanged():
    assert STEMMER.stem("xyzzyqu") == "xyzzyqu"
    assert STEMMER.stem("") == ""


def test_rule_table_size():
    assert len(RULES) >= 40
    assert [r.order for r in RULES] == sorted(r.order for r in RULES)


def test_golden_agreement(data_dir):
    pairs = golden_pairs(data_dir)
    assert len(pairs) >= 200
    misses = [(w, s, STEMMER.stem(w)) for w, s in pairs if STEMMER.stem(w) != s]
    assert 1 - len(misses) / len(pairs) >= 0.95
    # the single known miss: "berikan" is both ber-ikan and beri-kan, the
    # dictionary-first order picks the fish
    assert misses == [("berikan", "beri", "ikan")]


def test_roots_unchanged():
    changed = [r for r in ROOTS if STEMMER.stem(r) != r]
    assert changed == []


def test_rule_parse_errors():
    with pytest.raises(ConfigError, match="version"):
        parse_rules(["order\tkind\taffix\tpattern\tcandidates\tname", "1\tparticle-suffix\tlah\t-\t-\tx"])
    with pytest.raises(ConfigError, match="unsupported"):
        parse_rules(["# version: 9"])
    with pytest.raises(ConfigError, match="unknown kind"):
        parse_rules(["# version: 1", "1\tweird\tlah\t-\t-\tx"])
    with pytest.raises(ConfigError, match="duplicate"):
        parse_rules(["# version: 1", "1\tparticle-suffix\tlah\t-\t-\tx", "1\tparticle-suffix\tkah\t-\t-\ty"])


def test_custom_resources(tmp_path):
    roots = tmp_path / "roots.txt"
    roots.write_text("# roots\nmain\n", encoding="utf-8")
    assert load_roots(roots) == {"main"}
    slang = tmp_path / "slang.csv"
    slang.write_text("informal,standard\ngk,tidak\n", encoding="utf-8")
    assert load_slang(slang) == {"gk": "tidak"}
    slang.write_text("kata,baku\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="header"):
        load_slang(slang)
    roots.write_text("Main\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="lowercase"):
        load_roots(roots)
    with pytest.raises(ConfigError, match="not found"):
        load_rules(tmp_path / "missing.tsv")


# --- composed pipeline

def test_pipeline_examples():
    assert preprocess_pipeline("Gak suka iklan!!!") == ["tidak", "suka", "iklan"]
    assert preprocess_pipeline("!!!") == []
    assert preprocess_pipeline("main") == ["main"]
    assert preprocess_pipeline("Lagunya bagus, tolong diperbaiki") == ["lagu", "bagus", "baik"]


def test_preprocessor_toggles():
    text = "Gak suka yang lagunya"
    full = TextPreprocessor().fit()
    assert full.transform([text]) == [["tidak", "suka", "lagu"]]
    assert TextPreprocessor(use_stemmer=False).transform([text]) == [["tidak", "suka", "lagunya"]]
    assert TextPreprocessor(use_slang=False, use_stopwords=False, use_stemmer=False).transform([text]) == [
        ["gak", "suka", "yang", "lagunya"]
    ]
    assert TextPreprocessor().get_params()["use_stemmer"] is True


@given(st.text(alphabet="abcdeiklmnoprstuy !?.,@#0123456789", max_size=60))
def test_pipeline_outputs_clean_tokens(raw):
    for tok in preprocess_pipeline(raw):
        assert tok and tok == tok.lower() and tok.isalpha()
        assert tok not in STOPWORDS or tok in ROOTS
