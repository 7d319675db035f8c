"""Minimal-overlapping patterns in column-strict arrays, rectangular standard
tableaux and k-up-down permutations."""

from .fillings import Filling, PatternClass

__version__ = "0.1.0"

__all__ = ["Filling", "PatternClass", "__version__"]
