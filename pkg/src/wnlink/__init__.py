"""Wordnet induction by classifying dictionary-derived word-synset links."""

__version__ = "0.1.0"
