"""Bundled example data."""

from importlib import resources


def synthetic_reviews_path():
    """Path of the bundled 500-review synthetic corpus (``Ulasan``/``Rating`` CSV)."""
    return resources.files("sentimen.data").joinpath("synthetic_reviews.csv")
