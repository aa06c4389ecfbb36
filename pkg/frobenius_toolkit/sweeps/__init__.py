"""Batch invariant sweeps over (n, m) grids."""
