"""Octonions over GF(p), G2(p), and the class-two p-group of order p^14."""

__version__ = "0.1.0"
