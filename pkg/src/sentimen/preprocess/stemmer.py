"""Dictionary-driven confix-stripping stemmer for Indonesian.

Affixes are removed in the order particle -> possessive -> derivational
suffix -> derivational prefix (up to three prefix layers), checking the root
dictionary after every removal.  Prefix rules carry ordered recoding
candidates (``meny-`` may hide an ``s``, ``mem-`` a ``p``, ...); the first
candidate found in the dictionary wins.  When no path reaches a root the
stripped suffixes are restored one at a time and prefix removal is retried;
if that also fails the input word is returned untouched.

The rule table is data: see ``data/stem_rules.tsv``.  Rule order is part of
the stemmer's contract.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from functools import lru_cache

from ..exceptions import ConfigError

PARTICLE = "particle-suffix"
POSSESSIVE = "possessive-suffix"
DERIVATIONAL_SUFFIX = "derivational-suffix"
DERIVATIONAL_PREFIX = "derivational-prefix"
RULE_KINDS = (PARTICLE, POSSESSIVE, DERIVATIONAL_SUFFIX, DERIVATIONAL_PREFIX)
SUFFIX_KINDS = (PARTICLE, POSSESSIVE, DERIVATIONAL_SUFFIX)

RULES_VERSION = 1

# prefix/suffix pairs that never form a confix; the suffix is left alone
DISALLOWED_CONFIXES = (
    ("be", "i"),
    ("di", "an"),
    ("ke", "i"),
    ("ke", "kan"),
    ("me", "an"),
    ("se", "i"),
    ("se", "kan"),
    ("te", "an"),
)

# words shaped like these confixes are tried prefix-first
_PREFIX_FIRST = (
    re.compile(r"^be.+lah$"),
    re.compile(r"^be.+an$"),
    re.compile(r"^me.+i$"),
    re.compile(r"^di.+i$"),
    re.compile(r"^pe.+i$"),
    re.compile(r"^ter.+i$"),
)

_MAX_PREFIX_LAYERS = 3


@dataclass(frozen=True)
class StemRule:
    order: int
    kind: str
    affix: str
    pattern: str = ""
    candidates: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ConfigError(f"rule {self.order}: unknown kind {self.kind!r}")
        if not self.affix:
            raise ConfigError(f"rule {self.order}: empty affix")
        if self.kind == DERIVATIONAL_PREFIX and (not self.pattern or not self.candidates):
            raise ConfigError(f"rule {self.order}: prefix rules need a pattern and candidates")

    @property
    def family(self):
        # me-/mem-/meng- etc. are one prefix family for the repeat check
        return self.affix[:2]

    def apply(self, word):
        """Candidate stems produced by this rule, in order (empty if no match)."""
        if self.kind != DERIVATIONAL_PREFIX:
            if len(word) > len(self.affix) and word.endswith(self.affix):
                return (word[: -len(self.affix)],)
            return ()
        m = _compiled(self.pattern).match(word)
        if m is None:
            return ()
        out = []
        for template in self.candidates:
            cand = m.expand(template)
            if cand and cand not in out:
                out.append(cand)
        return tuple(out)


@lru_cache(maxsize=None)
def _compiled(pattern):
    return re.compile(pattern)


def parse_rules(lines, source="<rules>"):
    """Parse the tab-separated rule table.

    Columns: ``order kind affix pattern candidates name``; ``candidates`` is a
    ``|``-separated list of ``\\1``-style templates.  Lines starting with
    ``#`` are comments; ``# version: N`` declares the table version.
    """
    rules = []
    version = None
    rows = csv.reader((ln for ln in lines), delimiter="\t")
    header_seen = False
    for lineno, row in enumerate(rows, start=1):
        if not row or not "".join(row).strip():
            continue
        first = row[0].strip()
        if first.startswith("#"):
            m = re.match(r"#\s*version:\s*(\d+)", first)
            if m:
                version = int(m.group(1))
            continue
        if not header_seen:
            header_seen = True
            if first == "order":
                continue
        row = [c.strip() for c in row] + [""] * (6 - len(row))
        order, kind, affix, pattern, candidates, name = row[:6]
        try:
            order = int(order)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: bad order index {order!r}") from None
        cands = tuple(c for c in candidates.split("|") if c) if candidates and candidates != "-" else ()
        rules.append(
            StemRule(order, kind, affix, "" if pattern == "-" else pattern, cands, name)
        )
    if version is None:
        raise ConfigError(f"{source}: missing '# version:' line")
    if version != RULES_VERSION:
        raise ConfigError(f"{source}: unsupported rule table version {version}")
    orders = [r.order for r in rules]
    if len(set(orders)) != len(orders):
        raise ConfigError(f"{source}: duplicate order indices")
    return tuple(sorted(rules, key=lambda r: r.order))


@dataclass
class _Removal:
    rule: StemRule
    subject: str
    result: str


class _Attempt:
    """Mutable state for stemming one word."""

    def __init__(self, word, stemmer):
        self.original = word
        self.word = word
        self.removals = []
        self.stemmer = stemmer

    @property
    def found(self):
        return self.word in self.stemmer.roots

    def strip_suffixes(self):
        for kind in SUFFIX_KINDS:
            for rule in self.stemmer.rules_by_kind[kind]:
                cands = rule.apply(self.word)
                if not cands:
                    continue
                if kind == DERIVATIONAL_SUFFIX and self._disallowed(rule.affix):
                    continue
                self.removals.append(_Removal(rule, self.word, cands[0]))
                self.word = cands[0]
                break
            if self.found:
                return True
        return False

    def _disallowed(self, suffix):
        return any(
            self.word.startswith(pre) and suffix == suf for pre, suf in DISALLOWED_CONFIXES
        )

    def strip_prefixes(self):
        roots = self.stemmer.roots
        for _ in range(_MAX_PREFIX_LAYERS):
            if self.found:
                return True
            removed_families = {
                r.rule.family for r in self.removals if r.rule.kind == DERIVATIONAL_PREFIX
            }
            chosen = None
            fallback = None
            for rule in self.stemmer.rules_by_kind[DERIVATIONAL_PREFIX]:
                if rule.family in removed_families:
                    continue
                for cand in rule.apply(self.word):
                    if cand in roots:
                        chosen = (rule, cand)
                        break
                    if fallback is None:
                        fallback = (rule, cand)
                if chosen:
                    break
            step = chosen or fallback
            if step is None:
                return False
            rule, cand = step
            self.removals.append(_Removal(rule, self.word, cand))
            self.word = cand
        return self.found

    def restore_prefixes(self):
        for r in self.removals:
            if r.rule.kind == DERIVATIONAL_PREFIX:
                self.word = r.subject
                break
        self.removals = [r for r in self.removals if r.rule.kind != DERIVATIONAL_PREFIX]

    def loop_back(self):
        """Put suffixes back last-removed-first and retry prefix removal."""
        self.restore_prefixes()
        saved_removals = list(self.removals)
        saved_word = self.word
        for removal in reversed(saved_removals):
            kept = saved_removals[: saved_removals.index(removal)]
            if removal.rule.affix == "kan":
                # -kan may be -k + -an on a root ending in k
                self.removals = list(kept)
                self.word = removal.result + "k"
                if self.strip_prefixes():
                    return True
            self.removals = list(kept)
            self.word = removal.subject
            if self.strip_prefixes():
                return True
        self.removals = saved_removals
        self.word = saved_word
        return False


class ConfixStemmer:
    """Stem single lowercase words against a root dictionary.

    Parameters
    ----------
    roots : iterable of str
        Root words; lookups are exact.
    rules : sequence of StemRule
        Rule table in application order.
    """

    def __init__(self, roots, rules):
        self.roots = frozenset(roots)
        if not self.roots:
            raise ConfigError("root dictionary is empty")
        self.rules = tuple(sorted(rules, key=lambda r: r.order))
        self.rules_by_kind = {k: tuple(r for r in self.rules if r.kind == k) for k in RULE_KINDS}
        self._cache = {}

    def stem(self, word):
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        result = self._stem(word)
        self._cache[word] = result
        return result

    __call__ = stem

    def _stem(self, word):
        if not word or word in self.roots:
            return word
        if any(p.match(word) for p in _PREFIX_FIRST):
            attempt = _Attempt(word, self)
            if attempt.strip_prefixes() or attempt.strip_suffixes():
                return attempt.word
        attempt = _Attempt(word, self)
        if attempt.strip_suffixes() or attempt.strip_prefixes() or attempt.loop_back():
            return attempt.word
        return word


def stem_word(word, roots, rules):
    """Functional form of :meth:`ConfixStemmer.stem` (builds a throwaway stemmer)."""
    return ConfixStemmer(roots, rules).stem(word)
