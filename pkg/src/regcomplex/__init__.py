"""Exact construction and verification of regular polygonal complexes in E^3."""

from __future__ import annotations

__version__ = "0.1.0"

from .kernel import BACKEND

__all__ = ["BACKEND", "__version__"]
