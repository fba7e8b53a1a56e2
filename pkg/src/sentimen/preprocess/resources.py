"""Loaders for the bundled (or user-supplied) dictionaries and rule table."""

import csv
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..exceptions import ConfigError
from .stemmer import parse_rules

_DATA = "sentimen.preprocess.data"
DEFAULT_FILES = {
    "slang": "slang.csv",
    "stopwords": "stopwords.txt",
    "roots": "roots.txt",
    "rules": "stem_rules.tsv",
}


def _read_text(path, kind):
    if path is None:
        return resources.files(_DATA).joinpath(DEFAULT_FILES[kind]).read_text(encoding="utf-8")
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{path}: {kind} file not found")
    return path.read_text(encoding="utf-8")


def _word_list(path, kind):
    words = []
    for lineno, line in enumerate(_read_text(path, kind).splitlines(), start=1):
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        if word != word.lower() or len(word.split()) != 1:
            raise ConfigError(f"{path or DEFAULT_FILES[kind]}:{lineno}: entries must be single lowercase words, got {word!r}")
        words.append(word)
    return words


def load_stopwords(path=None):
    return frozenset(_word_list(path, "stopwords"))


def load_roots(path=None):
    roots = frozenset(_word_list(path, "roots"))
    if not roots:
        raise ConfigError("root dictionary is empty")
    return roots


def load_slang(path=None):
    """Two-column ``informal,standard`` CSV with a header row."""
    text = _read_text(path, "slang")
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:2]] != ["informal", "standard"]:
        raise ConfigError(f"{path or DEFAULT_FILES['slang']}: expected header 'informal,standard'")
    entries = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ConfigError(f"{path or DEFAULT_FILES['slang']}:{lineno}: expected two columns")
        key, value = row[0].strip(), row[1].strip()
        if key != key.lower() or len(key.split()) != 1 or not value:
            raise ConfigError(f"{path or DEFAULT_FILES['slang']}:{lineno}: bad entry {row!r}")
        entries[key] = value
    return entries


def load_rules(path=None):
    return parse_rules(_read_text(path, "rules").splitlines(), source=str(path or DEFAULT_FILES["rules"]))


@lru_cache(maxsize=None)
def default_resources():
    """Bundled (slang, stopwords, roots, rules), loaded once."""
    return load_slang(), load_stopwords(), load_roots(), load_rules()
