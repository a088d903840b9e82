"""Closure operations, phantom extensions and module modifications over
graded F_p-algebras."""

__version__ = "0.1.0"
