"""Exact invariants of irreducible quasi-ordinary hypersurface branches."""

__version__ = "0.1.0"
