"""Periodic grids, two-component spinor fields and their pointwise observables."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryContaminationError, ConfigurationError, DegenerateWeightError, DomainError
from .numerics import SIGMA_X, check_dft_size, wavenumbers

# Boundary guard: outermost EDGE_FRACTION of points on each side must stay
# below EDGE_TOLERANCE * max|psi|.
EDGE_FRACTION = 0.01
EDGE_TOLERANCE = 1e-8

DEFAULT_N = 2048
DEFAULT_LENGTH = 256.0


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid ``x_j = -L/2 + j*dx``, ``j = 0..n-1``."""

    n: int = DEFAULT_N
    length: float = DEFAULT_LENGTH

    def __post_init__(self):
        check_dft_size(self.n)
        if not (math.isfinite(self.length) and self.length > 0):
            raise ConfigurationError(f"grid length must be positive, got {self.length}")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return -0.5 * self.length + self.dx * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        return wavenumbers(self.n, self.length)

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.length

    def reflect(self, values: np.ndarray) -> np.ndarray:
        """Sample ``f(-x)`` given samples of ``f(x)`` (last axis)."""
        # x_j = -L/2 + j dx maps to x_{n-j mod n}
        return np.roll(values[..., ::-1], 1, axis=-1)


def _frozen(values, components: int, n: int) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.shape != (components, n):
        raise ConfigurationError(f"expected values of shape {(components, n)}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("field values must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SpinorField2:
    """Two-component field sampled on ``grid``; ``values[c, j]`` is component c at x_j."""

    grid: Grid1D
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 2, self.grid.n))

    @classmethod
    def from_profile(cls, grid: Grid1D, profile, spinor=(1.0, 0.0), t: float = 0.0) -> "SpinorField2":
        """Field ``profile(x) * spinor`` for a scalar profile array."""
        prof = np.asarray(profile, dtype=complex)
        u = np.asarray(spinor, dtype=complex)
        return cls(grid, u[:, None] * prof[None, :], t)

    @classmethod
    def zeros(cls, grid: Grid1D, t: float = 0.0) -> "SpinorField2":
        return cls(grid, np.zeros((2, grid.n), dtype=complex), t)

    def with_values(self, values, t: float | None = None) -> "SpinorField2":
        return SpinorField2(self.grid, values, self.t if t is None else t)

    def scaled(self, factor: complex) -> "SpinorField2":
        return self.with_values(self.values * factor)

    def norm2(self) -> float:
        return float(np.sum(probability_density(self)) * self.grid.dx)

    def normalized(self) -> "SpinorField2":
        nrm = self.norm2()
        if nrm <= 0.0:
            raise DomainError("cannot normalise a zero field")
        return self.scaled(1.0 / math.sqrt(nrm))

    def max_abs_difference(self, other: "SpinorField2") -> float:
        return float(np.max(np.abs(self.values - other.values)))


def edge_ratio(values: np.ndarray) -> float:
    """max|psi| over the outer edge band divided by max|psi| overall."""
    mag = np.sqrt(np.sum(np.abs(np.atleast_2d(values)) ** 2, axis=0))
    peak = mag.max()
    if peak == 0.0:
        return 0.0
    n = mag.size
    band = max(1, math.ceil(EDGE_FRACTION * n))
    edge = max(mag[:band].max(), mag[-band:].max())
    return float(edge / peak)


def check_boundary(values: np.ndarray, t: float, what: str = "field") -> None:
    ratio = edge_ratio(values)
    if ratio >= EDGE_TOLERANCE:
        raise BoundaryContaminationError(
            f"{what} at t={t:g} reaches the box edge (edge/peak = {ratio:.3e}); "
            "enlarge the grid length")


def gaussian_profile(grid: Grid1D, sigma: float = 2.0, center: float = 0.0) -> np.ndarray:
    """Scalar Gaussian whose squared modulus has standard deviation ``sigma``.

    Normalised so that the spinor ``profile * (1, 1)`` has unit norm.
    """
    amp = (1.0 / (8.0 * np.pi * sigma**2)) ** 0.25
    return amp * np.exp(-((grid.x - center) ** 2) / (4.0 * sigma**2))


def gaussian_initial(grid: Grid1D) -> SpinorField2:
    """The default source state ``(1/(32 pi))**(1/4) exp(-x**2/16) (1, 1)``."""
    if math.exp(-grid.length**2 / 64.0) >= 1e-14:
        raise BoundaryContaminationError(
            f"grid length {grid.length} too short for the sigma=2 Gaussian (need L > 45.4)")
    return SpinorField2.from_profile(grid, gaussian_profile(grid), (1.0, 1.0), t=0.0)


def _same_grid(a: SpinorField2, b: SpinorField2) -> None:
    if a.grid != b.grid:
        raise ConfigurationError(f"grid mismatch: {a.grid} vs {b.grid}")


def inner_product(bra: SpinorField2, ket: SpinorField2) -> complex:
    """Rectangle-rule overlap ``sum_j bra_j^dagger ket_j dx``."""
    _same_grid(bra, ket)
    if bra.t != ket.t:
        warnings.warn(f"inner product of fields at different times ({bra.t} vs {ket.t})",
                      stacklevel=2)
    return complex(np.sum(np.conj(bra.values) * ket.values) * bra.grid.dx)


def probability_density(psi: SpinorField2) -> np.ndarray:
    v = psi.values
    return v[0].real**2 + v[0].imag**2 + v[1].real**2 + v[1].imag**2


def bilinear_density(bra: SpinorField2, ket: SpinorField2) -> np.ndarray:
    """Pointwise ``bra^dagger ket`` (complex)."""
    _same_grid(bra, ket)
    return np.sum(np.conj(bra.values) * ket.values, axis=0)


def bilinear_current(bra: SpinorField2, ket: SpinorField2, c: float = 1.0) -> np.ndarray:
    """Pointwise ``c * bra^dagger sigma_x ket`` (complex)."""
    _same_grid(bra, ket)
    return c * np.einsum("ij,ik,kj->j", np.conj(bra.values), SIGMA_X, ket.values)


def probability_current(psi: SpinorField2, c: float = 1.0) -> np.ndarray:
    # psi^dagger sigma_x psi = 2 Re(conj(psi_1) psi_2)
    v = psi.values
    return 2.0 * c * (np.conj(v[0]) * v[1]).real


def mean_position(weight, grid: Grid1D) -> float:
    w = np.asarray(weight, dtype=float)
    if w.shape != (grid.n,):
        raise ConfigurationError(f"weight shape {w.shape} does not match grid size {grid.n}")
    if np.any(w < 0):
        raise DomainError("weights must be nonnegative")
    total = float(np.sum(w))
    if not total > 0.0:
        raise DegenerateWeightError("weight has zero total mass")
    return float(np.sum(grid.x * w) / total)


@dataclass(frozen=True)
class TimeSeries:
    """Scalar samples against time (values may be complex)."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values)
        if t.shape != v.shape:
            raise ConfigurationError("times and values must have matching shapes")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.times.size

    def max_abs_deviation(self, reference=None) -> float:
        ref = self.values[0] if reference is None else reference
        return float(np.max(np.abs(self.values - ref)))


@dataclass(frozen=True)
class DensitySnapshot:
    """Density and current of a (bi)linear form at one time."""

    t: float
    density: np.ndarray
    current: np.ndarray
    fields: tuple = field(default=(), repr=False, compare=False)
