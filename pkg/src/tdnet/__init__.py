"""Data-centre topologies from bipartite base graphs and transversal designs."""

from __future__ import annotations

__version__ = "0.1.0"
