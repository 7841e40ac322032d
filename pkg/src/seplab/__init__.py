"""Separatrix graphs of rational vector fields on the Riemann sphere."""

__version__ = "0.1.0"
