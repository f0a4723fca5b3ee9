"""
BSGeom

Exact models of the solvable Baumslag-Solitar groups BS(1,n), their model
space X_n and boundaries R and Q_n, a conjugacy engine for uniform
quasisimilarity actions on R, boundary dynamics on triple spaces and the
commensurability and classification algebra.

The package is usable as a library, from the `bsgeom` command line and as
an MCP tool server.
"""

__version__ = "0.1.0"
