"""Exact Ringel-Hall algebras of quiver representations over finite fields."""

__version__ = "0.1.0"
