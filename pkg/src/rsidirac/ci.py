"""Forward-only (Copenhagen) pipeline: evolve, measure at t_f, track <x>(t)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .field import (
    DensitySnapshot,
    Grid1D,
    SpinorField2,
    TimeSeries,
    check_boundary,
    gaussian_initial,
    inner_product,
    mean_position,
    probability_current,
    probability_density,
)
from .numerics import dft_forward
from .propagator import ModePropagator, build_modes, evolve

DEFAULT_T_FINAL = 40.0
DEFAULT_SAMPLE_DT = math.pi / 32


def default_snapshot_times(t_final: float, count: int = 4) -> tuple[float, ...]:
    return tuple(float(t) for t in np.linspace(0.0, t_final, count))


def sample_times(t_start: float, t_stop: float, dt: float) -> np.ndarray:
    """``t_start + j*dt`` for ``j = 0..floor((t_stop - t_start)/dt)``."""
    if not dt > 0:
        raise ConfigurationError(f"sample interval must be positive, got {dt}")
    count = int(math.floor((t_stop - t_start) / dt + 1e-9)) + 1
    return t_start + dt * np.arange(count)


@dataclass(frozen=True)
class TransitionResult:
    amplitude: complex
    probability: float

    @classmethod
    def from_amplitude(cls, amplitude: complex) -> "TransitionResult":
        a = complex(amplitude)
        return cls(a, float((a.conjugate() * a).real))


@dataclass(frozen=True)
class ZbwTrace:
    """Centroid history with its least-squares drift line removed."""

    times: np.ndarray
    mean_x: np.ndarray
    slope: float
    intercept: float
    residual: np.ndarray
    total_weight: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))

    def spectrum(self, pad_factor: int = 8) -> tuple[np.ndarray, np.ndarray]:
        """Angular frequencies and single-sided sinusoid amplitudes of the residual.

        The residual is zero padded to a power of two so the radix-2 transform
        applies; amplitudes are scaled so a pure ``a*cos(w t)`` peaks near ``a``.
        """
        n = self.residual.size
        size = 8
        while size < pad_factor * n:
            size *= 2
        padded = np.zeros(size, dtype=complex)
        padded[:n] = self.residual
        spec = dft_forward(padded)[: size // 2]
        dt = self.times[1] - self.times[0]
        freqs = 2.0 * np.pi * np.arange(size // 2) / (size * dt)
        return freqs, 2.0 * np.abs(spec) / n

    def dominant_frequency(self, min_frequency: float | None = None) -> tuple[float, float]:
        """(angular frequency, amplitude) of the largest non-DC spectral peak."""
        freqs, amps = self.spectrum()
        if min_frequency is None:
            # skip the DC lobe: one full window period
            min_frequency = 2.0 * np.pi / (self.times[-1] - self.times[0])
        mask = freqs >= min_frequency
        i = int(np.argmax(np.where(mask, amps, -1.0)))
        return float(freqs[i]), float(amps[i])

    def band_amplitude(self, center: float, rel_width: float = 0.15) -> float:
        freqs, amps = self.spectrum()
        mask = np.abs(freqs - center) <= rel_width * center
        return float(amps[mask].max())


def fit_drift(times: np.ndarray, mean_x: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Least-squares line through ``mean_x(t)``; returns slope, intercept, residual."""
    design = np.stack([times, np.ones_like(times)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(design, mean_x, rcond=None)
    return float(slope), float(intercept), mean_x - (slope * times + intercept)


@dataclass
class CiExperiment:
    """Source state released at t=0 and a detector state tested at ``t_final``.

    ``initial`` and ``final`` default to the sigma=2 Gaussian with spinor (1, 1).
    ``guard_boundary=False`` admits delocalised states such as plane waves.
    """

    grid: Grid1D = field(default_factory=Grid1D)
    mass: float = 1.0
    t_final: float = DEFAULT_T_FINAL
    snapshot_times: tuple[float, ...] | None = None
    sample_dt: float = DEFAULT_SAMPLE_DT
    initial: SpinorField2 | None = None
    final: SpinorField2 | None = None
    check_norms: bool = True
    guard_boundary: bool = True

    def __post_init__(self):
        if self.initial is None:
            self.initial = gaussian_initial(self.grid)
        if self.final is None:
            g = gaussian_initial(self.grid)
            self.final = g.with_values(g.values, t=self.t_final)
        if self.snapshot_times is None:
            self.snapshot_times = default_snapshot_times(self.t_final)
        self.snapshot_times = tuple(sorted(float(t) for t in self.snapshot_times))
        if self.snapshot_times and (self.snapshot_times[0] < 0 or self.snapshot_times[-1] > self.t_final):
            raise ConfigurationError("snapshot times must lie in [0, t_final]")
        if self.initial.grid != self.grid or self.final.grid != self.grid:
            raise ConfigurationError("boundary states must live on the experiment grid")
        if self.check_norms:
            for name, st in (("initial", self.initial), ("final", self.final)):
                if abs(st.norm2() - 1.0) > 1e-12:
                    raise ConfigurationError(f"{name} state is not normalised (norm^2={st.norm2():.15f})")

    def modes(self) -> ModePropagator:
        return build_modes(self.grid, self.mass)


@dataclass
class CiRun:
    snapshots: list[DensitySnapshot]
    result: TransitionResult
    norms: TimeSeries
    evolved_final: SpinorField2


def ci_snapshot(psi: SpinorField2) -> DensitySnapshot:
    return DensitySnapshot(psi.t, probability_density(psi), probability_current(psi), (psi,))


def ci_state(exp: CiExperiment, t: float, modes: ModePropagator | None = None) -> SpinorField2:
    modes = modes or exp.modes()
    psi = evolve(exp.initial, t - exp.initial.t, modes)
    if exp.guard_boundary:
        check_boundary(psi.values, t, "CI wavefunction")
    return psi


def run_ci(exp: CiExperiment, modes: ModePropagator | None = None) -> CiRun:
    """Evolve to each snapshot and to ``t_final``; amplitude is taken at ``t_final`` only."""
    modes = modes or exp.modes()
    snaps = [ci_snapshot(ci_state(exp, t, modes)) for t in exp.snapshot_times]
    psi_f = ci_state(exp, exp.t_final, modes)
    detector = exp.final.with_values(exp.final.values, t=exp.t_final)
    result = TransitionResult.from_amplitude(inner_product(detector, psi_f))
    times = np.array([s.t for s in snaps] or [exp.t_final])
    norms = np.array([float(np.sum(s.density) * exp.grid.dx) for s in snaps] or [psi_f.norm2()])
    return CiRun(snaps, result, TimeSeries(times, norms, "norm"), psi_f)


def zbw_trace_ci(exp: CiExperiment, sample_dt: float | None = None,
                 modes: ModePropagator | None = None) -> ZbwTrace:
    """Centroid of ``psi^dagger psi`` sampled on ``[0, t_final]`` minus a linear drift."""
    dt = exp.sample_dt if sample_dt is None else sample_dt
    if dt > math.pi / 8 + 1e-15:
        raise ConfigurationError(f"sample interval {dt} too coarse; need <= pi/8")
    modes = modes or exp.modes()
    times = sample_times(0.0, exp.t_final, dt)
    centroid = np.empty_like(times)
    weight = np.empty_like(times)
    for i, t in enumerate(times):
        rho = probability_density(ci_state(exp, t, modes))
        centroid[i] = mean_position(rho, exp.grid)
        weight[i] = np.sum(rho) * exp.grid.dx
    slope, intercept, resid = fit_drift(times, centroid)
    return ZbwTrace(times, centroid, slope, intercept, resid, weight)
