"""Unified-transform solver for the stress-loaded elastodynamic half-plane."""
from .medium import Medium, derive_medium

__all__ = ["Medium", "derive_medium"]
__version__ = "0.1.0"
