"""Geometrically continuous splines on G^r-domains: exact dimensions and bases."""

__version__ = "0.1.0"
