"""Trace prediction for chaotic reversible cellular automata built from
reversible Turing machines."""

__version__ = "0.1.0"
