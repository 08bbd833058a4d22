"""Exact class algebra: extended scalars and multiplicity functions."""
