"""Exact budgeted coverage with pairwise-normal object families on
embedded planar graphs, solved by recursion over Voronoi separators."""

__version__ = "0.1.0"
