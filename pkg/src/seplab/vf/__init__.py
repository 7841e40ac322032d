"""Rational vector fields: equilibria, separatrix tracing, graph extraction."""
