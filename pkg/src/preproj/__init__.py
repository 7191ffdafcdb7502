"""Exact certification of higher preprojective structure for graded quiver algebras."""

from .linalg import Field, FieldElem, Matrix, DEFAULT_PRIME

__all__ = ["Field", "FieldElem", "Matrix", "DEFAULT_PRIME"]
