"""Exact-arithmetic workbench for hypergeometric differential systems."""

__version__ = "0.1.0"
