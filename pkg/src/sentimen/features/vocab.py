"""Training-split vocabulary and fixed-length id sequences for the neural track."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..exceptions import ConfigError, DataError

PAD = "<pad>"
UNK = "<unk>"
PAD_ID = 0
UNK_ID = 1
VOCAB_FORMAT = "sentimen.vocabulary"
VOCAB_VERSION = 1


@dataclass
class Vocabulary:
    """Token <-> id mapping; ids 0 and 1 are PAD and UNK.

    ``counts[i]`` is the training frequency of ``tokens[i]`` (0 for the
    specials).
    """

    tokens: list
    counts: list
    min_frequency: int = 1
    source: str = "train"
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.tokens[:2] != [PAD, UNK]:
            raise DataError("vocabulary must start with PAD and UNK")
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise DataError("vocabulary tokens must be unique")

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def id_of(self, token):
        return self.index.get(token, UNK_ID)

    def decode(self, ids):
        """Map ids back to tokens, stopping at the first PAD."""
        out = []
        for i in ids:
            if i == PAD_ID:
                break
            out.append(self.tokens[i])
        return out

    def to_dict(self):
        return {
            "version": VOCAB_VERSION,
            "format": VOCAB_FORMAT,
            "min_frequency": self.min_frequency,
            "source": self.source,
            "tokens": list(self.tokens),
            "counts": [int(c) for c in self.counts],
        }

    @classmethod
    def from_dict(cls, payload):
        _check_version(payload, VOCAB_FORMAT, VOCAB_VERSION)
        return cls(list(payload["tokens"]), list(payload["counts"]),
                   payload["min_frequency"], payload.get("source", "train"))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _check_version(payload, fmt, version):
    got = payload.get("version")
    if not isinstance(got, int) or got != version:
        raise ConfigError(f"unsupported {fmt} version {got!r} (expected {version})")
    if payload.get("format", fmt) != fmt:
        raise ConfigError(f"expected a {fmt} file, got {payload.get('format')!r}")


def build_vocab(corpus, min_freq=2, source="train"):
    """Keep tokens seen at least ``min_freq`` times; ids by frequency, then text."""
    if min_freq < 1:
        raise ConfigError(f"min_freq must be >= 1, got {min_freq}")
    corpus = list(corpus)
    if not corpus:
        raise DataError("cannot build a vocabulary from an empty corpus")
    freq = Counter(tok for doc in corpus for tok in doc)
    kept = sorted((t for t, c in freq.items() if c >= min_freq), key=lambda t: (-freq[t], t))
    return Vocabulary([PAD, UNK, *kept], [0, 0, *(freq[t] for t in kept)], min_freq, source)


def compute_percentile_length(corpus, p=95):
    """Nearest-rank percentile of document lengths."""
    lengths = sorted(len(doc) for doc in corpus)
    if not lengths:
        raise DataError("cannot take a percentile of an empty corpus")
    if not 0 < p <= 100:
        raise ConfigError(f"percentile must be in (0, 100], got {p}")
    rank = math.ceil(Fraction(str(p)) * len(lengths) / 100)
    return lengths[max(rank, 1) - 1]


@dataclass(frozen=True)
class IdSequence:
    ids: tuple
    true_length: int


def encode_sequence(tokens, vocab, max_len):
    """Truncate to the first ``max_len`` tokens, map OOV to UNK, right-pad."""
    if max_len < 1:
        raise ConfigError(f"max_len must be positive, got {max_len}")
    head = [vocab.id_of(t) for t in list(tokens)[:max_len]]
    return IdSequence(tuple(head + [PAD_ID] * (max_len - len(head))), len(head))


def encode_batch(corpus, vocab, max_len):
    """Encode many documents at once -> (ids[n, max_len], lengths[n])."""
    seqs = [encode_sequence(doc, vocab, max_len) for doc in corpus]
    ids = np.array([s.ids for s in seqs], dtype=np.int64).reshape(len(seqs), max_len)
    lengths = np.array([s.true_length for s in seqs], dtype=np.int64)
    return ids, lengths
