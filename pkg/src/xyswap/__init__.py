"""Exact topological recursion on genus-zero spectral curves and the x-y swap formula."""

__version__ = "0.1.0"
ENGINE_VERSION = "xyswap-engine-1"
