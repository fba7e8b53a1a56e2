"""Vocabulary/sequence encoding (neural track) and TF-IDF (classical track)."""

from .tfidf import (
    SparseVector,
    TfIdfModel,
    TfidfVectorizer,
    fit_tfidf,
    transform_corpus,
    transform_tfidf,
)
from .vocab import (
    PAD,
    PAD_ID,
    UNK,
    UNK_ID,
    IdSequence,
    Vocabulary,
    build_vocab,
    compute_percentile_length,
    encode_batch,
    encode_sequence,
)

__all__ = [
    "PAD", "PAD_ID", "UNK", "UNK_ID", "IdSequence", "SparseVector", "TfIdfModel",
    "TfidfVectorizer", "Vocabulary", "build_vocab", "compute_percentile_length",
    "encode_batch", "encode_sequence", "fit_tfidf", "transform_corpus", "transform_tfidf",
]
