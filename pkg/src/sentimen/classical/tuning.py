"""Random search over decision-tree hyperparameters scored by CV macro F1."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..exceptions import ConfigError
from ..rng import DEFAULT_SEED, make_rng
from .tree import DecisionTree

DEFAULT_SPACE = {
    "max_depth": [8, 12, 16, 24, 32, None],
    "min_samples_leaf": [1, 2, 4, 8],
    "min_samples_split": [2, 4, 8, 16],
}


@dataclass
class Candidate:
    params: dict
    score: float
    cv: object = None


@dataclass
class TuneResult:
    candidates: list
    best_index: int
    seed: int

    @property
    def best(self):
        return self.candidates[self.best_index]

    @property
    def best_params(self):
        return dict(self.best.params)

    @property
    def best_score(self):
        return self.best.score

    def to_dict(self):
        return {
            "version": 1,
            "seed": self.seed,
            "best_index": self.best_index,
            "best_params": self.best_params,
            "best_score": self.best_score,
            "candidates": [{"params": c.params, "macro_f1": c.score} for c in self.candidates],
        }


def sample_candidates(space, n_iter, seed):
    """``n_iter`` configurations, each value drawn uniformly per parameter."""
    if not space or any(len(v) == 0 for v in space.values()):
        raise ConfigError("tuning space must name at least one parameter, each with at least one value")
    if n_iter < 1:
        raise ConfigError(f"n_iter must be >= 1, got {n_iter}")
    rng = make_rng(seed)
    keys = sorted(space)
    return [{k: space[k][int(rng.integers(len(space[k])))] for k in keys} for _ in range(n_iter)]


def tune_decision_tree(
    X, y, space=None, n_iter=50, seed=DEFAULT_SEED, folds=5, vectorizer=None, balancer=None, n_jobs=1,
):
    """Every candidate sees the same fold assignment (derived from ``seed``).

    The best candidate is the first one reaching the maximal macro F1.
    """
    from ..evaluation.cv import PipelineSpec, cross_validate, resolve_threads

    space = DEFAULT_SPACE if space is None else space
    configs = sample_candidates(space, n_iter, seed)

    def score(params):
        spec = PipelineSpec(DecisionTree(**params), vectorizer, balancer, name="decision_tree")
        cv = cross_validate(X, y, spec, folds=folds, seed=seed)
        return Candidate(params, cv.mean["macro_f1"], cv)

    n_jobs = resolve_threads(n_jobs)
    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            cands = list(pool.map(score, configs))
    else:
        cands = [score(p) for p in configs]
    best = max(range(len(cands)), key=lambda i: (cands[i].score, -i))
    return TuneResult(cands, best, seed)
