"""Exact Radon transforms over finite affine geometries."""

__version__ = "0.1.0"
