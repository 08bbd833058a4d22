"""Tests for the class algebra."""
