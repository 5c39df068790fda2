"""Time-symmetric (RSI) pipeline.

A transition is described by two single-sign waves: ``psi`` anchored at
``t_initial`` and evolved forwards, ``phi`` anchored at ``t_final`` and evolved
backwards.  Their pointwise product is the complex transition amplitude density;
its integral is the same at every time.

Positive channel: density ``phi^dagger psi``, current ``c phi^dagger sigma_x psi``.
Negative channel: density ``psi^dagger phi``, current ``c psi^dagger sigma_x phi``
(conjugation order reversed, as for a wave running from the final condition
back to the initial one).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .ci import DEFAULT_SAMPLE_DT, DEFAULT_T_FINAL, TransitionResult, ZbwTrace, default_snapshot_times, fit_drift, sample_times
from .conservation import continuity_residual
from .errors import ConfigurationError, DegenerateWeightError, EnergySignError
from .field import (
    DensitySnapshot,
    Grid1D,
    SpinorField2,
    TimeSeries,
    bilinear_current,
    bilinear_density,
    check_boundary,
    gaussian_initial,
    mean_position,
)
from .propagator import ModePropagator, build_modes, evolve, project, require_energy_sign

CHANNELS = {"positive": +1, "negative": -1}

# A_s(t) is sampled at this many uniform times across [t_initial, t_final]
DEFAULT_AMPLITUDE_SAMPLES = 41


def channel_sign(channel: str) -> int:
    try:
        return CHANNELS[channel]
    except KeyError:
        raise ConfigurationError(f"unknown channel {channel!r}; use 'positive' or 'negative'") from None


@dataclass
class RsiExperiment:
    """Boundary data for one transition.

    ``source`` is given at ``t_initial`` and ``detector`` at ``t_final``; both
    default to the sigma=2 Gaussian with spinor (1, 1).  With ``project=True``
    the channel's energy projector is applied to both, otherwise they must
    already be of the channel's sign.  ``renormalize`` rescales the projected
    boundary states to unit norm (zero projections are left at zero).
    ``detector_channel`` exists only to state a mixed-sign request explicitly,
    which is rejected.
    """

    grid: Grid1D = field(default_factory=Grid1D)
    mass: float = 1.0
    t_initial: float = 0.0
    t_final: float = DEFAULT_T_FINAL
    source: SpinorField2 | None = None
    detector: SpinorField2 | None = None
    channel: str = "positive"
    detector_channel: str | None = None
    project: bool = True
    renormalize: bool = True
    snapshot_times: tuple[float, ...] | None = None
    sample_dt: float = DEFAULT_SAMPLE_DT
    amplitude_samples: int = DEFAULT_AMPLITUDE_SAMPLES
    guard_boundary: bool = True

    def __post_init__(self):
        channel_sign(self.channel)
        if self.detector_channel is not None:
            channel_sign(self.detector_channel)
        if not self.t_final >= self.t_initial:
            raise ConfigurationError("t_final must not precede t_initial")
        if self.source is None or self.detector is None:
            g = gaussian_initial(self.grid)
            if self.source is None:
                self.source = g.with_values(g.values, t=self.t_initial)
            if self.detector is None:
                self.detector = g.with_values(g.values, t=self.t_final)
        if self.source.grid != self.grid or self.detector.grid != self.grid:
            raise ConfigurationError("boundary states must live on the experiment grid")
        if self.snapshot_times is None:
            self.snapshot_times = tuple(self.t_initial + t for t in
                                        default_snapshot_times(self.t_final - self.t_initial))
        self.snapshot_times = tuple(sorted(float(t) for t in self.snapshot_times))
        if self.amplitude_samples < 2:
            raise ConfigurationError("need at least two amplitude samples")

    @property
    def sign(self) -> int:
        return channel_sign(self.channel)

    def modes(self) -> ModePropagator:
        return build_modes(self.grid, self.mass)


@dataclass
class RsiBoundaries:
    """Channel-projected boundary waves: ``psi`` at t_initial, ``phi`` at t_final."""

    psi: SpinorField2
    phi: SpinorField2
    sign: int
    psi_norm2_raw: float
    phi_norm2_raw: float


def boundary_states(exp: RsiExperiment, modes: ModePropagator | None = None) -> RsiBoundaries:
    modes = modes or exp.modes()
    sign = exp.sign
    if exp.detector_channel is not None and channel_sign(exp.detector_channel) != sign:
        raise EnergySignError(
            "initial and final conditions must both be positive or both negative energy")
    src = exp.source.with_values(exp.source.values, t=exp.t_initial)
    det = exp.detector.with_values(exp.detector.values, t=exp.t_final)
    if exp.project:
        psi = project(src, modes, sign)
        phi = project(det, modes, sign)
    else:
        require_energy_sign(src, modes, sign, "source boundary")
        require_energy_sign(det, modes, sign, "detector boundary")
        psi, phi = src, det
    n_psi, n_phi = psi.norm2(), phi.norm2()
    if exp.renormalize:
        if n_psi > 0:
            psi = psi.scaled(1.0 / math.sqrt(n_psi))
        if n_phi > 0:
            phi = phi.scaled(1.0 / math.sqrt(n_phi))
    return RsiBoundaries(psi, phi, sign, n_psi, n_phi)


def waves_at(exp: RsiExperiment, bounds: RsiBoundaries, t: float,
             modes: ModePropagator) -> tuple[SpinorField2, SpinorField2]:
    psi = evolve(bounds.psi, t - exp.t_initial, modes)
    phi = evolve(bounds.phi, t - exp.t_final, modes)
    if exp.guard_boundary:
        check_boundary(psi.values, t, "forward wave")
        check_boundary(phi.values, t, "backward wave")
    return psi, phi


def amplitude_density(psi: SpinorField2, phi: SpinorField2, sign: int, c: float = 1.0) -> DensitySnapshot:
    if sign > 0:
        rho, cur = bilinear_density(phi, psi), bilinear_current(phi, psi, c)
    else:
        rho, cur = bilinear_density(psi, phi), bilinear_current(psi, phi, c)
    return DensitySnapshot(psi.t, rho, cur, (psi, phi))


def rsi_snapshot(exp: RsiExperiment, t: float, modes: ModePropagator | None = None,
                 bounds: RsiBoundaries | None = None) -> DensitySnapshot:
    modes = modes or exp.modes()
    bounds = bounds or boundary_states(exp, modes)
    psi, phi = waves_at(exp, bounds, t, modes)
    return amplitude_density(psi, phi, bounds.sign, modes.c)


@dataclass
class RsiRun:
    snapshots: list[DensitySnapshot]
    result: TransitionResult
    amplitude_series: TimeSeries
    boundaries: RsiBoundaries

    @property
    def amplitude_drift(self) -> float:
        return self.amplitude_series.max_abs_deviation()


def run_rsi(exp: RsiExperiment, modes: ModePropagator | None = None) -> RsiRun:
    """Amplitude density snapshots, ``A_s`` from the ``t_initial`` sample and ``A_s(t)``."""
    modes = modes or exp.modes()
    bounds = boundary_states(exp, modes)
    dx = exp.grid.dx
    snaps = [rsi_snapshot(exp, t, modes, bounds) for t in exp.snapshot_times]
    times = np.linspace(exp.t_initial, exp.t_final, exp.amplitude_samples)
    amps = np.array([np.sum(rsi_snapshot(exp, t, modes, bounds).density) * dx for t in times])
    result = TransitionResult.from_amplitude(amps[0])
    return RsiRun(snaps, result, TimeSeries(times, amps, "A_s"), bounds)


def run_rsi_negative(exp: RsiExperiment, modes: ModePropagator | None = None) -> RsiRun:
    """:func:`run_rsi` on the negative-energy (antiparticle) channel."""
    if exp.channel != "negative":
        exp = replace(exp, channel="negative", detector_channel=None)
    return run_rsi(exp, modes)


def centroid_trace_rsi(exp: RsiExperiment, sample_dt: float | None = None,
                       modes: ModePropagator | None = None) -> ZbwTrace:
    """Centroid of ``|rho_s|`` over the transition window, drift line removed."""
    dt = exp.sample_dt if sample_dt is None else sample_dt
    if dt > math.pi / 8 + 1e-15:
        raise ConfigurationError(f"sample interval {dt} too coarse; need <= pi/8")
    modes = modes or exp.modes()
    bounds = boundary_states(exp, modes)
    times = sample_times(exp.t_initial, exp.t_final, dt)
    centroid = np.empty_like(times)
    weight = np.empty_like(times)
    for i, t in enumerate(times):
        w = np.abs(rsi_snapshot(exp, t, modes, bounds).density)
        weight[i] = np.sum(w) * exp.grid.dx
        if weight[i] < 1e-14:
            raise DegenerateWeightError(f"|rho_s| integrates to {weight[i]:.3e} at t={t:g}")
        centroid[i] = mean_position(w, exp.grid)
    slope, intercept, resid = fit_drift(times, centroid)
    return ZbwTrace(times, centroid, slope, intercept, resid, weight)


def local_conservation_rsi(snapshots: Sequence[DensitySnapshot], grid: Grid1D,
                           stride: int = 1) -> TimeSeries:
    """Centred-difference residual of ``d_t rho_s + d_x j_s`` (max modulus per time)."""
    return continuity_residual(snapshots, grid.dx, stride)
