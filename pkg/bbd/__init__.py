# Balanced bipartite digraph analysis toolkit

__version__ = "1.0.0"
