"""Decidable calculus of monomial (weighted-shift) operators on l2(N) and l2(Z)."""

__version__ = "0.1.0"
