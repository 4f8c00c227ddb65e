"""Prolongation-based symmetry and supersymmetry workbench for matrix Schrodinger systems."""

__version__ = "0.1.0"
