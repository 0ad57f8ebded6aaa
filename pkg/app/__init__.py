"""
GPMColor - optimal and list colorings of two generalized partition matroids.

This package provides the solver (chromatic number, optimal coloring through
integral circulations, kernels and list coloring), brute-force oracles and
the JSON interchange used by the command line in main.py.
"""

__version__ = "1.0.0"
