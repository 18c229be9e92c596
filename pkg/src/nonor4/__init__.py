"""Obstructions to knots bounding low-genus nonorientable surfaces in B^4."""

__version__ = "0.1.0"
