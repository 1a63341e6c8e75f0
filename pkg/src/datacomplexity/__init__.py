"""Complexity profiling for classical and quantum-embedded datasets."""

__version__ = "0.1.0"
