"""Kernelization for Treewidth-2 Vertex Deletion."""

__version__ = "0.1.0"
