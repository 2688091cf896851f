"""Partitioned T-coherent book embedding: solver, oracles, reductions and certificates."""

__version__ = "0.1.0"
