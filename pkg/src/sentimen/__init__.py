"""Sentiment classification of informal Indonesian app reviews.

Two tracks share one preprocessing pipeline: TF-IDF + SMOTE + classical
classifiers under stratified cross-validation, and a from-scratch BiLSTM.
"""

__version__ = "0.1.0"
