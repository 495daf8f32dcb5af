"""Projection, entropy and sumset inequalities on finite instances."""

__version__ = "0.1.0"
