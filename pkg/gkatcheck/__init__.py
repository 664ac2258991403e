# gkatcheck/__init__.py
"""Equivalence checking for KAT and GKAT programs via automata on guarded strings."""

import sys

__version__ = "0.1.0"

# expressions are walked recursively; deep loop nests need headroom
if sys.getrecursionlimit() < 10_000:
    sys.setrecursionlimit(10_000)
