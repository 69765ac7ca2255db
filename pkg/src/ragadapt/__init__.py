"""Retrieval-augmented adaptation toolkit for code completion models."""

__version__ = "0.1.0"
