"""
Frobenius Toolkit

Exact computations with Frobenius functionals on parabolic and seaweed
subalgebras of sl(n): Kirillov forms, principal elements, the graphs that
organize them, and the r-matrices they produce.
"""

__version__ = "0.1.0"
