"""Entanglement transfer through a quantum field."""

__version__ = "0.1.0"
