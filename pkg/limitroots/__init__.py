"""Roots and limit roots of infinite Coxeter groups."""

__version__ = "1.0.0"
