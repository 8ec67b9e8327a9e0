"""Exact truncated computer algebra for the graded Goldman-Turaev Lie bialgebra
and the Kashiwara-Vergne problem of a surface Sigma_{g,n+1}."""

__version__ = "0.1.0"
