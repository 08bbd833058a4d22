"""Tests for decomposition, equivalence, the registry and ideal splits."""
