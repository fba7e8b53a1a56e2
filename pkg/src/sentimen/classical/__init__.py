"""Multinomial NB, linear SVM and CART tree on TF-IDF features, plus tree tuning."""

from .mnb import MultinomialNB, predict_mnb, train_mnb
from .persist import load_model, save_model
from .svm import LinearSVM, primal_objective, smo_binary, train_linear_svm
from .tree import DecisionTree, best_split, gini, predict_tree, train_decision_tree
from .tuning import DEFAULT_SPACE, Candidate, TuneResult, sample_candidates, tune_decision_tree

CLASSIFIERS = {"mnb": MultinomialNB, "svm": LinearSVM, "tree": DecisionTree}

__all__ = [
    "CLASSIFIERS", "DEFAULT_SPACE", "Candidate", "DecisionTree", "LinearSVM", "MultinomialNB",
    "TuneResult", "best_split", "gini", "load_model", "predict_mnb", "predict_tree", "primal_objective",
    "sample_candidates", "save_model", "smo_binary", "train_decision_tree", "train_linear_svm",
    "train_mnb", "tune_decision_tree",
]
