"""Exact checks for an Artin-Schreier style reduction of Lubin-Tate towers."""

__version__ = "0.1.0"
