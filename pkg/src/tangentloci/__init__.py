"""Quadric calculus and common tangent lines to four spheres."""

__version__ = "0.1.0"
