"""Exact tools for the Terwilliger polynomial of Q-polynomial distance-regular graphs."""
from __future__ import annotations

__version__ = "0.1.0"
