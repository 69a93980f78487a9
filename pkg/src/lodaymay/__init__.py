"""Loday constructions of filtered graded-commutative algebras over F_p.

Builds the chain complex of a simplicial finite set tensored with an algebra,
its May filtration by total weight, and the resulting spectral sequence.
"""

__version__ = "0.1.0"
