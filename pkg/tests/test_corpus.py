import hashlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sentimen.corpus import (
    LABEL_NAMES,
    LabeledSample,
    RawReview,
    SentimentLabel,
    apportion,
    class_counts,
    clean_dataset,
    map_rating_to_label,
    read_reviews_csv,
    read_samples_csv,
    stratified_split,
    stratified_subsample,
    write_samples_csv,
)
from sentimen.exceptions import ConfigError, DataError, StratificationError

NEG, NET, POS = SentimentLabel


def make(counts):
    """counts per class code -> samples with unique texts"""
    out = []
    for code, n in enumerate(counts):
        out += [LabeledSample(f"c{code}-{i}", SentimentLabel(code)) for i in range(n)]
    return out


@pytest.mark.parametrize("rating,label", [(1, NEG), (2, NEG), (3, NET), (4, POS), (5, POS)])
def test_rating_mapping(rating, label):
    assert map_rating_to_label(rating) is label


@pytest.mark.parametrize("bad", [0, 6, -1, 2.5, "3", True])
def test_rating_out_of_range(bad):
    with pytest.raises(DataError):
        map_rating_to_label(bad)


def test_label_names():
    assert LABEL_NAMES == ("Negatif", "Netral", "Positif")
    assert SentimentLabel.parse("positif") is POS
    assert SentimentLabel.parse(1) is NET
    with pytest.raises(DataError):
        SentimentLabel.parse("senang")


def test_clean_dataset_basic():
    rows = [RawReview("bagus", 5), RawReview("bagus", 5)]
    assert clean_dataset(rows) == [LabeledSample("bagus", POS, rating=5)]
    assert clean_dataset([RawReview("", 3), RawReview("   ", 1)]) == []


def test_six_row_fixture(data_dir):
    rows = read_reviews_csv(data_dir / "six_rows.csv")
    assert len(rows) == 6
    cleaned = clean_dataset(rows)
    assert [s.text for s in cleaned] == [
        "bagus banget aplikasinya", "jelek sering error", "biasa aja sih", "mantap, lagunya lengkap",
    ]
    # first occurrence wins, so the duplicate keeps rating 5
    assert cleaned[0].rating == 5
    assert [s.label for s in cleaned] == [POS, NEG, NET, POS]


def test_duplicates_compare_trimmed_text():
    cleaned = clean_dataset([RawReview(" bagus ", 4), RawReview("bagus", 1)])
    assert len(cleaned) == 1 and cleaned[0].label is POS


@given(st.lists(st.tuples(st.sampled_from(["", " ", "a", "b", " a", "c c"]), st.integers(1, 5)), max_size=30))
def test_clean_idempotent(pairs):
    once = clean_dataset([RawReview(t, r) for t, r in pairs])
    assert clean_dataset(once) == once


def test_missing_column(data_dir):
    with pytest.raises(DataError, match="Rating"):
        read_reviews_csv(data_dir / "no_rating.csv")


def test_bad_rating_names_row(data_dir):
    with pytest.raises(DataError, match="row 2"):
        read_reviews_csv(data_dir / "bad_rating.csv")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        read_reviews_csv(tmp_path / "nope.csv")


def test_apportion():
    assert apportion(10, [70, 20, 10]) == [7, 2, 1]
    assert apportion(1, [1, 1]) == [1, 0]
    assert sum(apportion(20000, [13681, 1180, 5139])) == 20000
    with pytest.raises(ConfigError):
        apportion(3, [0, 0])


def test_split_hand_example():
    data = make([3, 1, 6])
    split = stratified_split(data, (0.8, 0.0, 0.2), seed=42)
    assert len(split.test) == 2
    assert class_counts(split.test) == [1, 0, 1]
    assert split.validation == []
    for got, ideal in zip(class_counts(split.test), (0.6, 0.2, 1.2)):
        assert abs(got - ideal) <= 1


def test_split_identity_and_determinism():
    data = make([5, 4, 9])
    s = stratified_split(data, (1.0, 0.0, 0.0), seed=1)
    assert s.train == data and s.validation == [] and s.test == []
    a = stratified_split(data, (0.6, 0.2, 0.2), seed=7)
    b = stratified_split(data, (0.6, 0.2, 0.2), seed=7)
    assert a.indices == b.indices


def test_split_errors():
    data = make([5, 1, 5])
    with pytest.raises(ConfigError):
        stratified_split(data, (0.5, 0.5, 0.1))
    with pytest.raises(StratificationError, match="Netral"):
        stratified_split(data, (0.6, 0.2, 0.2), min_per_class=1)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(0, 40), min_size=3, max_size=3),
    st.sampled_from([(0.8, 0.1, 0.1), (0.7225, 0.1275, 0.15), (0.5, 0.0, 0.5), (1 / 3, 1 / 3, 1 / 3)]),
    st.integers(0, 2**32 - 1),
)
def test_split_properties(counts, fractions, seed):
    data = make(counts)
    split = stratified_split(data, fractions, seed)
    joined = split.train + split.validation + split.test
    assert sorted(s.text for s in joined) == sorted(s.text for s in data)
    for part, frac in zip((split.train, split.validation, split.test), fractions):
        for code, n in enumerate(counts):
            assert abs(class_counts(part)[code] - n * frac) <= 1


def test_subsample():
    data = make([10, 20, 70])
    sub = stratified_subsample(data, 10, seed=3)
    assert class_counts(sub) == [1, 2, 7]
    assert stratified_subsample(data, 100) == data
    assert stratified_subsample(data, 10, seed=3) == sub
    with pytest.raises(DataError):
        stratified_subsample(data, 101)


def test_samples_csv_roundtrip(tmp_path):
    samples = [
        LabeledSample('ada "kutip", koma', POS, ("ada", "kutip"), 5),
        LabeledSample("baris\nbaru", NET, (), 3),
        LabeledSample("tanpa rating", NEG, ("tanpa",)),
    ]
    p = tmp_path / "s.csv"
    write_samples_csv(p, samples, with_tokens=True)
    assert read_samples_csv(p) == samples
    digest = hashlib.sha256(p.read_bytes()).hexdigest()
    write_samples_csv(p, samples, with_tokens=True)
    assert hashlib.sha256(p.read_bytes()).hexdigest() == digest


def test_read_samples_falls_back_to_ratings(data_dir):
    samples = read_samples_csv(data_dir / "six_rows.csv")
    assert [s.label for s in samples][:2] == [POS, NEG]
