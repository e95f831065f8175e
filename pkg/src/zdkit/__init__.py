"""Schur-coefficient calculus, L-function zero detection, and zero statistics."""

__version__ = "0.1.0"
