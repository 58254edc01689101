"""Randomized graph sparsification: multiplicative (2k-1)-spanners via
exponential start-time broadcasts, ultra-sparse skeletons, weighted-graph
spanners through scale decomposition and cluster contraction, near-additive
(1+eps, beta)-spanners/emulators by superclustering and interconnection, a
round-synchronous CONGEST simulator, and exact verification oracles."""

from ._core import backend_name
from .graph import (Graph, BfsForest, GraphFormatError, UNREACHED, bfs_bounded,
                    dijkstra, generate, parse_graph_spec, read_graph,
                    write_graph)

__version__ = "0.1.0"

__all__ = [
    "Graph", "BfsForest", "GraphFormatError", "UNREACHED", "backend_name",
    "bfs_bounded", "dijkstra", "generate", "parse_graph_spec", "read_graph",
    "write_graph", "__version__",
]
