"""Text normalization, slang/stopword filtering and confix-stripping stemming."""

from .pipeline import TextPreprocessor, preprocess_pipeline
from .resources import default_resources, load_roots, load_rules, load_slang, load_stopwords
from .stemmer import ConfixStemmer, StemRule, stem_word
from .text import normalize_text, remove_stopwords, replace_slang, tokenize

__all__ = [
    "ConfixStemmer",
    "StemRule",
    "TextPreprocessor",
    "default_resources",
    "load_roots",
    "load_rules",
    "load_slang",
    "load_stopwords",
    "normalize_text",
    "preprocess_pipeline",
    "remove_stopwords",
    "replace_slang",
    "stem_word",
    "tokenize",
]
