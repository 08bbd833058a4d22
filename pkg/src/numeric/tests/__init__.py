"""Tests for matrix tuples and the commutant machinery."""
