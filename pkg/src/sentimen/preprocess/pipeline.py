from sklearn.base import BaseEstimator, TransformerMixin

from . import resources
from .stemmer import ConfixStemmer
from .text import normalize_text, remove_stopwords, replace_slang, tokenize


class TextPreprocessor(TransformerMixin, BaseEstimator):
    """Raw review text -> list of stemmed tokens.

    Steps: normalize -> tokenize -> slang replacement -> stopword removal ->
    stemming.  Each dictionary path defaults to the bundled file.  The
    transformer is stateless; ``fit`` only loads the resources.

    Parameters
    ----------
    slang_path, stopwords_path, roots_path, rules_path : str or None
        Override the bundled resource files.
    use_slang, use_stopwords, use_stemmer : bool
        Toggle individual steps.
    """

    def __init__(
        self,
        slang_path=None,
        stopwords_path=None,
        roots_path=None,
        rules_path=None,
        use_slang=True,
        use_stopwords=True,
        use_stemmer=True,
    ):
        self.slang_path = slang_path
        self.stopwords_path = stopwords_path
        self.roots_path = roots_path
        self.rules_path = rules_path
        self.use_slang = use_slang
        self.use_stopwords = use_stopwords
        self.use_stemmer = use_stemmer

    def fit(self, X=None, y=None):
        if not any((self.slang_path, self.stopwords_path, self.roots_path, self.rules_path)):
            slang, stops, roots, rules = resources.default_resources()
        else:
            slang = resources.load_slang(self.slang_path)
            stops = resources.load_stopwords(self.stopwords_path)
            roots = resources.load_roots(self.roots_path)
            rules = resources.load_rules(self.rules_path)
        self.slang_ = slang
        self.stopwords_ = stops
        self.stemmer_ = ConfixStemmer(roots, rules)
        return self

    def process(self, text):
        if not hasattr(self, "stemmer_"):
            self.fit()
        tokens = tokenize(normalize_text(text))
        if self.use_slang:
            tokens = replace_slang(tokens, self.slang_)
        if self.use_stopwords:
            tokens = remove_stopwords(tokens, self.stopwords_)
        if self.use_stemmer:
            tokens = [self.stemmer_.stem(tok) for tok in tokens]
        return tokens

    def transform(self, X):
        return [self.process(text) for text in X]


_default = None


def preprocess_pipeline(text):
    """Run the full pipeline with the bundled resources.

    An empty result means the review carries no usable tokens and should be
    dropped by the caller.
    """
    global _default
    if _default is None:
        _default = TextPreprocessor().fit()
    return _default.process(text)
