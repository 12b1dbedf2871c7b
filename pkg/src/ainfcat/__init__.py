"""Computational engine for finite-dimensional A-infinity categories and the
combinatorial Fukaya precategory of the flat 2-torus."""

__version__ = "0.1.0"
