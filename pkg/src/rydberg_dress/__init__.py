"""Doppler-robust Rydberg CNOT gates protected by auxiliary-level dressing."""

__version__ = "0.1.0"
