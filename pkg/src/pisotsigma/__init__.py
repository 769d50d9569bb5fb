"""Certified computation of the approximation constants of (alpha zeta^n) mod 1."""

__version__ = "0.1.0"
