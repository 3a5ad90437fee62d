"""Efficiency of weight vectors for reciprocal matrices."""

__version__ = "1.0.0"
