"""Exact lambda-ring, filtered-ring and U-comonad computations."""

__version__ = "0.1.0"
