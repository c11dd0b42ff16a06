"""Adversary-bound programs, combining rules, divide-and-conquer recurrences,
string-problem oracles, and randomized bracketing search."""

__version__ = "0.1.0"
