"""Review ingestion, rating-based labels, deduplication and stratified sampling."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from .exceptions import ConfigError, DataError, StratificationError
from .rng import DEFAULT_SEED, make_rng

TEXT_COLUMN = "Ulasan"
RATING_COLUMN = "Rating"
LABEL_COLUMN = "label"
TOKENS_COLUMN = "tokens"


class SentimentLabel(enum.IntEnum):
    NEGATIF = 0
    NETRAL = 1
    POSITIF = 2

    @property
    def display(self):
        return self.name.capitalize()

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(int(value))
        key = str(value).strip().upper()
        if key.isdigit():
            return cls(int(key))
        try:
            return cls[key]
        except KeyError:
            raise DataError(f"unknown sentiment label {value!r}") from None


LABEL_NAMES = tuple(lab.display for lab in SentimentLabel)


@dataclass(frozen=True)
class RawReview:
    text: str
    rating: int


@dataclass(frozen=True)
class LabeledSample:
    text: str
    label: SentimentLabel
    tokens: tuple = ()
    rating: int | None = None

    def with_tokens(self, tokens):
        return replace(self, tokens=tuple(tokens))


@dataclass
class DatasetSplit:
    train: list
    validation: list
    test: list
    seed: int = DEFAULT_SEED
    indices: dict = field(default_factory=dict, repr=False)


def map_rating_to_label(rating):
    """1-2 stars -> Negatif, 3 -> Netral, 4-5 -> Positif."""
    if isinstance(rating, bool) or not isinstance(rating, (int, np.integer)):
        raise DataError(f"rating must be an integer in 1..5, got {rating!r}")
    if not 1 <= rating <= 5:
        raise DataError(f"rating must be in 1..5, got {rating}")
    if rating <= 2:
        return SentimentLabel.NEGATIF
    if rating == 3:
        return SentimentLabel.NETRAL
    return SentimentLabel.POSITIF


def _parse_rating(value, row_number):
    text = str(value).strip()
    try:
        rating = int(text)
    except ValueError:
        try:
            as_float = float(text)
        except ValueError:
            raise DataError(f"row {row_number}: unparseable rating {value!r}") from None
        if not math.isfinite(as_float) or not as_float.is_integer():
            raise DataError(f"row {row_number}: unparseable rating {value!r}")
        rating = int(as_float)
    if not 1 <= rating <= 5:
        raise DataError(f"row {row_number}: rating {rating} outside 1..5")
    return rating


def _open_csv(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{path}: file not found")
    return path.open(newline="", encoding="utf-8")


def read_reviews_csv(path):
    """Read ``Ulasan``/``Rating`` rows; extra columns are ignored.

    Row numbers in error messages count data rows from 1 (the header is row 0).
    """
    with _open_csv(path) as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        for required in (TEXT_COLUMN, RATING_COLUMN):
            if required not in columns:
                raise DataError(f"{path}: missing required column {required!r}")
        rows = []
        for i, row in enumerate(reader, start=1):
            rows.append(RawReview(row[TEXT_COLUMN] or "", _parse_rating(row[RATING_COLUMN], i)))
    return rows


def clean_dataset(rows):
    """Attach labels, drop empty texts, collapse duplicate texts (first wins).

    Duplicates are detected on the text with surrounding whitespace trimmed.
    Accepts ``RawReview`` rows or already-cleaned ``LabeledSample`` objects,
    which makes the function idempotent.
    """
    seen = set()
    out = []
    for row in rows:
        text = row.text.strip()
        if not text or text in seen:
            continue
        seen.add(text)
        if isinstance(row, LabeledSample):
            out.append(replace(row, text=text))
        else:
            out.append(LabeledSample(text, map_rating_to_label(row.rating), rating=row.rating))
    return out


def apportion(total, weights):
    """Largest-remainder apportionment of ``total`` seats over ``weights``.

    Remainder ties go to the earlier position.  Exact rational arithmetic,
    so the result does not depend on float rounding.
    """
    weights = [Fraction(w) for w in weights]
    denom = sum(weights)
    if denom <= 0:
        raise ConfigError("apportionment weights must have a positive sum")
    quotas = [Fraction(total) * w / denom for w in weights]
    seats = [math.floor(q) for q in quotas]
    left = total - sum(seats)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - seats[i]), i))
    for i in order[:left]:
        seats[i] += 1
    return seats


def _class_indices(data):
    groups = {}
    for i, sample in enumerate(data):
        groups.setdefault(int(sample.label), []).append(i)
    return dict(sorted(groups.items()))


def stratified_split(data, fractions=(0.8, 0.1, 0.1), seed=DEFAULT_SEED, min_per_class=0):
    """Split into train/validation/test preserving class proportions.

    Per class, the split sizes come from largest-remainder apportionment of
    the class count over ``fractions``; members are drawn from a seeded
    permutation.  Each split keeps the input order.  When ``min_per_class``
    is positive, every non-empty split must receive at least that many
    samples of every class.
    """
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or any(f < 0 or not math.isfinite(f) for f in fractions):
        raise ConfigError(f"fractions must be three non-negative reals, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError(f"fractions must sum to 1, got {sum(fractions)!r}")
    rng = make_rng(seed)
    parts = ([], [], [])
    for code, members in _class_indices(data).items():
        counts = apportion(len(members), fractions)
        for k, (frac, cnt) in enumerate(zip(fractions, counts)):
            if frac > 0 and cnt < min_per_class:
                name = SentimentLabel(code).display
                raise StratificationError(
                    name,
                    f"class {name} has {len(members)} samples; too small to give "
                    f"{min_per_class} to every non-empty split",
                )
        perm = rng.permutation(len(members))
        start = 0
        for k, cnt in enumerate(counts):
            parts[k].extend(members[j] for j in perm[start:start + cnt])
            start += cnt
    idx = [sorted(p) for p in parts]
    return DatasetSplit(
        train=[data[i] for i in idx[0]],
        validation=[data[i] for i in idx[1]],
        test=[data[i] for i in idx[2]],
        seed=seed,
        indices={"train": idx[0], "validation": idx[1], "test": idx[2]},
    )


def stratified_subsample(data, n, seed=DEFAULT_SEED):
    """Draw ``n`` samples with per-class counts apportioned to class sizes."""
    if n <= 0:
        raise DataError(f"subsample size must be positive, got {n}")
    if n > len(data):
        raise DataError(f"subsample size {n} exceeds dataset size {len(data)}")
    groups = _class_indices(data)
    quotas = apportion(n, [len(m) for m in groups.values()])
    rng = make_rng(seed)
    chosen = []
    for members, q in zip(groups.values(), quotas):
        perm = rng.permutation(len(members))
        chosen.extend(members[j] for j in perm[:q])
    return [data[i] for i in sorted(chosen)]


def class_counts(samples):
    counts = [0] * len(SentimentLabel)
    for s in samples:
        counts[int(s.label)] += 1
    return counts


def write_samples_csv(path, samples, with_tokens=False):
    """Persist samples with an added ``label`` column (and optional ``tokens``)."""
    header = [TEXT_COLUMN, RATING_COLUMN, LABEL_COLUMN]
    if with_tokens:
        header.append(TOKENS_COLUMN)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for s in samples:
            row = [s.text, "" if s.rating is None else s.rating, s.label.display]
            if with_tokens:
                row.append(" ".join(s.tokens))
            writer.writerow(row)


def read_samples_csv(path):
    """Load samples written by :func:`write_samples_csv`.

    Files without a ``label`` column are treated as raw review CSVs and
    labelled from their ratings.
    """
    with _open_csv(path) as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        if TEXT_COLUMN not in columns:
            raise DataError(f"{path}: missing required column {TEXT_COLUMN!r}")
        has_label = LABEL_COLUMN in columns
        if not has_label and RATING_COLUMN not in columns:
            raise DataError(f"{path}: missing required column {RATING_COLUMN!r}")
        samples = []
        for i, row in enumerate(reader, start=1):
            raw_rating = (row.get(RATING_COLUMN) or "").strip()
            rating = _parse_rating(raw_rating, i) if raw_rating else None
            if has_label:
                try:
                    label = SentimentLabel.parse(row[LABEL_COLUMN])
                except DataError as exc:
                    raise DataError(f"row {i}: {exc}") from None
            elif rating is None:
                raise DataError(f"row {i}: empty rating")
            else:
                label = map_rating_to_label(rating)
            tokens = tuple((row.get(TOKENS_COLUMN) or "").split())
            samples.append(LabeledSample(row[TEXT_COLUMN] or "", label, tokens, rating))
    return samples
