"""Exact local structure of representation varieties and related invariants."""

__version__ = "0.1.0"
