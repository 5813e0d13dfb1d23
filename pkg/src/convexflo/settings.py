"""Global numerical tolerances.

All tolerances live in a single frozen record.  Override them for a block of
code with :func:`tolerances`; the override is stored in a context variable, so
it is local to the current thread / task.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-10  # hermiticity, antisymmetry, unitarity, norms
    reconstruction: float = 1e-9  # factorization round trips
    verdict: float = 1e-8  # concurrence threshold for "convex-Gaussian"
    psd_clip: float = 1e-8  # eigenvalues in [-psd_clip, 0) are clipped to 0
    rank: float = 1e-12  # relative eigenvalue cutoff for numerical rank
    degenerate_outcome: float = 1e-12  # measurement outcome treated as impossible


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "convexflo_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _current.get()


@contextlib.contextmanager
def tolerances(**overrides: float):
    """Temporarily override selected tolerances, e.g. ``tolerances(verdict=1e-10)``."""
    token = _current.set(dataclasses.replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
