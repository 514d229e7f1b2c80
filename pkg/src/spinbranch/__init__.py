"""Branching laws of Spin(m+1,1) restricted to its minimal parabolic P,
the matching coadjoint-orbit geometry, and the Fourier-analytic checks."""

from __future__ import annotations

__version__ = "0.1.0"
