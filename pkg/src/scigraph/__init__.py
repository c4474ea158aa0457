"""Scholarly metadata property graph, indicators and Cobb-Douglas scoring."""

__version__ = "0.1.0"
