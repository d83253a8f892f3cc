"""Numerical toolkit for the first Painleve equation y'' = 6 y^2 + t.

Pole-aware integration, zero extraction, monodromy-based Stokes data,
turning-point asymptotics, and solution-type classification.
"""

from __future__ import annotations

__version__ = "0.1.0"
