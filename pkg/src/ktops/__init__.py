"""Coupled kicked tops: quantum Floquet evolution, entanglement measures,
Husimi phase-space occupancy, the canonical classical map, and random-matrix
predictions."""

__version__ = "0.1.0"
