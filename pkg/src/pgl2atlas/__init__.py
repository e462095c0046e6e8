"""Finite subgroups of PGL2 over finite fields."""

__version__ = "0.1.0"
