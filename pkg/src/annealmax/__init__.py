"""Simulated annealing for nonnegative submodular maximization."""

__version__ = "0.1.0"
