"""optuple: unitary-equivalence classes of operator tuples."""

__version__ = "0.1.0"
