"""
errors.py

Base exception shared by every package. Each subclass lives next to the code
that raises it and sets ``category``, the machine-readable tag the CLI prints
on failure.
"""

from __future__ import annotations


class TailStatsError(Exception):
    """Root of all library errors. ``category`` is stable across releases."""

    category: str = "error"

    def to_dict(self) -> dict:
        return {"error": self.category, "message": str(self)}
