"""Token-level text normalization for informal Indonesian reviews."""

import re
import unicodedata

_URL = re.compile(r"(?<!\S)(?:http|www)\S*")
_MENTION_OR_TAG = re.compile(r"[@#]\w+")
_WS = re.compile(r"\s+")


def normalize_text(text):
    """Lowercase, drop URLs/mentions/hashtags, keep letters only, squeeze spaces.

    Any character that is not Unicode-alphabetic becomes a space, so
    ``"lagu2"`` yields ``"lagu"`` and ``"bagus!!!keren"`` two words.
    """
    text = unicodedata.normalize("NFC", text)
    text = unicodedata.normalize("NFC", text.lower())
    text = _URL.sub(" ", text)
    text = _MENTION_OR_TAG.sub(" ", text)
    text = "".join(ch if ch.isalpha() else " " for ch in text)
    # lower() can emit characters whose NFC form differs, so settle them
    text = "".join(ch if ch.isalpha() else " " for ch in unicodedata.normalize("NFC", text.lower()))
    return _WS.sub(" ", text).strip()


def tokenize(text):
    return text.split()


def replace_slang(tokens, slang):
    """Single pass: replacements are not looked up again."""
    return [slang.get(tok, tok) for tok in tokens]


def remove_stopwords(tokens, stopwords):
    return [tok for tok in tokens if tok not in stopwords]
