"""Subspace subcodes of Reed-Solomon codes: schemes, distinguisher, attack."""

from .field import Field, make_field

__all__ = ["Field", "make_field"]
__version__ = "0.1.0"
