# gkatcheck/core/__init__.py
"""Syntax, semantics, automata and equivalence engine."""
