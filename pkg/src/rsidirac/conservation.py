"""Finite-difference check of the local continuity law d_t rho + d_x j = 0.

Deliberately independent of the spectral machinery: both derivatives are
second-order centred differences on stored snapshots.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ConfigurationError
from .field import DensitySnapshot, TimeSeries


def centered_dx(values: np.ndarray, dx: float, stride: int = 1) -> np.ndarray:
    """Periodic centred difference with step ``stride*dx``."""
    h = stride * dx
    return (np.roll(values, -stride, axis=-1) - np.roll(values, stride, axis=-1)) / (2.0 * h)


def continuity_residual(snapshots: Sequence[DensitySnapshot], dx: float,
                        stride: int = 1, rtol: float = 1e-9) -> TimeSeries:
    """Max |d_t rho + d_x j| at every interior snapshot time.

    Snapshots must be uniformly spaced in time; the time derivative at
    snapshot ``i`` uses ``i-1`` and ``i+1``, the spatial one ``stride`` cells.
    """
    if len(snapshots) < 3:
        raise ConfigurationError("need at least three snapshots")
    times = np.array([s.t for s in snapshots], dtype=float)
    steps = np.diff(times)
    if np.any(steps <= 0) or np.ptp(steps) > rtol * max(abs(steps[0]), 1.0):
        raise ConfigurationError("snapshot times must be uniformly spaced and increasing")
    if stride < 1:
        raise ConfigurationError("stride must be a positive integer")
    dt = steps.mean()
    out = []
    for i in range(1, len(snapshots) - 1):
        d_rho = (np.asarray(snapshots[i + 1].density) - np.asarray(snapshots[i - 1].density)) / (2.0 * dt)
        d_j = centered_dx(np.asarray(snapshots[i].current), dx, stride)
        out.append(float(np.max(np.abs(d_rho + d_j))))
    return TimeSeries(times[1:-1], np.array(out), "continuity residual")
