"""Upper-tail rate functions for subgraph counts in random r-uniform hypergraphs."""

__version__ = "0.1.0"
