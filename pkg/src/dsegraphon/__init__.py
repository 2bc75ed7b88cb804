"""Workbench for combinatorial Dyson-Schwinger equations on decorated
rooted trees: Hopf-algebra operations, minimal-subtraction
renormalization with toy Feynman rules, step-graphon diagnostics of the
solution series, graph polynomials, and a Haar-measure model of the
solution space.
"""

__version__ = "0.1.0"
