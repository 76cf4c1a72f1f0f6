"""Exact-arithmetic Lie superalgebras, G-modules and Harish-Chandra pairs."""

from .fields import FieldCtx, MultiPoly

__all__ = ["FieldCtx", "MultiPoly"]
__version__ = "0.1.0"
