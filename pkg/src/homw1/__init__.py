"""Graph Hom complexes, mod-2 homology and the Stiefel-Whitney class w1."""

__version__ = "0.1.0"
