"""Bruhat-Tits strata for ramified unitary Rapoport-Zink spaces of signature (1, n-1)."""

__version__ = "0.1.0"
