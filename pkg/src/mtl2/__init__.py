"""Two-level metric temporal logic: parsing, proof checking, proof search,
and exact rational-interval semantics with countermodel extraction."""

__version__ = "0.1.0"
