"""Bipartite digraphical and graphical regular representations of small groups."""

__version__ = "0.1.0"
