"""sl(n) supports, functional families and r-matrices."""
