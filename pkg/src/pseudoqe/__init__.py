"""Quantifier elimination and executable models for ordered structures with a
discrete closed predicate Z, its successor, projection and a shift map."""

__version__ = "0.1.0"
