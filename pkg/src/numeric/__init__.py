"""Matrix tuples and the finite-dimensional algebra behind decomposition."""
