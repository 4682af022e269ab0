"""Algebraically defined bipartite graphs over finite fields."""

from adgraphs.ff import Field, FieldError, field_of_order, make_field

__version__ = "0.1.0"

__all__ = ["Field", "FieldError", "field_of_order", "make_field", "__version__"]
