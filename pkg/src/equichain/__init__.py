"""Equivariant chain maps between chromatic complexes, and the weak symmetry
breaking / renaming solvability test they decide."""

__version__ = "0.1.0"
