"""Isotypic decomposition, equivalence, classification and ideal splits."""
