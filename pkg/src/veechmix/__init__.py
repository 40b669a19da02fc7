"""Weak-mixing certificates for interval exchanges and translation flows."""

__version__ = "0.1.0"
