"""Molecular graph GAN with a quantum-circuit Born machine prior."""

__version__ = "0.1.0"
