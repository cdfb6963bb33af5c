"""Filtered simplicial sets over finite posets: subdivision, Ex, homotopy and intersection homology."""

from __future__ import annotations

__version__ = "0.1.0"
