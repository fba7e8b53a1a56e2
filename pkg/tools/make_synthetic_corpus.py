"""Regenerate the bundled 500-review synthetic corpus (deterministic, seed 42).

Usage: python tools/make_synthetic_corpus.py [output.csv]
"""

import csv
import sys
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "sentimen" / "data" / "synthetic_reviews.csv"

TOPICS = [
    "lagunya", "playlist", "aplikasi ini", "fitur download", "podcast", "rekomendasi lagu",
    "tampilan baru", "fitur lirik", "mode offline", "kualitas audio", "spotify", "pencarian lagu",
]
POSITIVE = [
    "bagus banget", "mantap", "keren", "sangat membantu", "suka banget", "lancar jaya",
    "rekomendasinya pas", "gampang dipakai", "enak didengar", "puas banget", "mantul", "terbaik",
]
NEGATIVE = [
    "jelek", "sering error", "iklannya kebanyakan", "lemot banget", "suka keluar sendiri",
    "gak bisa dibuka", "kecewa", "ngebug terus", "mahal banget", "susah login", "buruk", "parah",
]
NEUTRAL = [
    "biasa aja", "lumayan lah", "cukup", "standar", "kadang bagus kadang tidak",
    "oke tapi masih kurang", "not bad", "ya gitu deh",
]
OPENERS = ["", "", "", "min ", "tolong ", "jujur ", "pokoknya ", "overall "]
CLOSERS = ["", "", "", " 👍", "!!!", " sih", " deh", " min", " tolong diperbaiki", " semoga makin bagus"]
SLANG = {"tidak": "gak", "sangat": "bgt", "yang": "yg", "sudah": "udh"}


def review(rng, kind):
    topic = TOPICS[rng.integers(len(TOPICS))]
    pool = {"pos": POSITIVE, "neg": NEGATIVE, "neu": NEUTRAL}[kind]
    words = [pool[rng.integers(len(pool))] for _ in range(1 + rng.integers(2))]
    text = OPENERS[rng.integers(len(OPENERS))] + topic + " " + " dan ".join(words)
    if rng.random() < 0.25:
        text += " " + TOPICS[rng.integers(len(TOPICS))] + " juga"
    text += CLOSERS[rng.integers(len(CLOSERS))]
    if rng.random() < 0.3:
        text = " ".join(SLANG.get(w, w) for w in text.split())
    if rng.random() < 0.2:
        text = text.capitalize()
    return text


def rating_for(rng, kind):
    if kind == "pos":
        return int(rng.choice([4, 5], p=[0.3, 0.7]))
    if kind == "neg":
        return int(rng.choice([1, 2], p=[0.7, 0.3]))
    return 3


def generate(n=500, seed=42):
    rng = np.random.default_rng(seed)
    kinds = rng.choice(["pos", "neg", "neu"], size=n, p=[0.66, 0.26, 0.08])
    return [(review(rng, k), rating_for(rng, k)) for k in kinds]


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else OUT
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Ulasan", "Rating"])
        w.writerows(generate())


if __name__ == "__main__":
    main(sys.argv)
