"""Randomized-grid hyperparameter search for CART decision trees."""

__version__ = "0.1.0"
