"""Spherical systems attached to free saturated weight monoids."""

__version__ = "0.1.0"
