"""Concurrent graph games with determined local interactions."""

__version__ = "0.1.0"
