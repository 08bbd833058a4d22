"""Tests for the reference oracles."""
