"""Time-optimal transport of two-level quantum states, Hermitian and PT-symmetric."""

__version__ = "0.1.0"
