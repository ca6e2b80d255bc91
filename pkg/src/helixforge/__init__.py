"""Exact rational helices, PH curves, approximate rotation-minimizing frames and sweep surfaces."""

__version__ = "0.1.0"
