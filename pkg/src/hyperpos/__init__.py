"""Exact-arithmetic position invariants for hypersurface families on
projective varieties: distributive constants, dimension profiles,
replacement systems, Hilbert weights, and height margin checks."""

__version__ = "0.1.0"
