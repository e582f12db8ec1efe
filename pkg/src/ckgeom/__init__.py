"""Numerics for the nine two-dimensional Cayley-Klein spaces."""
__version__ = "0.1.0"
