"""Exact free-particle evolution in momentum space and energy-sign projection.

The wave equation ``(1/c) d_t psi + sigma_x d_x psi + (i m c/hbar) sigma_z psi = 0``
becomes, for a plane wave ``exp(i k x)``, ``i hbar d_t psi_k = H(k) psi_k`` with
``H(k) = c hbar k sigma_x + m c**2 sigma_z``.  Each mode is advanced with the
closed-form unitary ``exp(-i H(k) dt / hbar)``; no time stepping is involved.

Positive energy means the ``+hbar*omega`` eigenspace of ``H(k)``, i.e. time
dependence ``exp(-i omega t)``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError, EnergySignError
from .field import Grid1D, SpinorField2
from .numerics import SIGMA_0, SIGMA_X, SIGMA_Z, dft_forward, dft_inverse, mat2_exp_unitary


class ModePropagator:
    """Per-mode Hamiltonians, energies, projectors and cached unitaries for one grid."""

    def __init__(self, grid: Grid1D, mass: float = 1.0, c: float = 1.0, hbar: float = 1.0):
        if not mass > 0:
            raise ConfigurationError(f"mass must be positive, got {mass}")
        if not (c > 0 and hbar > 0):
            raise ConfigurationError("c and hbar must be positive")
        self.grid = grid
        self.mass = float(mass)
        self.c = float(c)
        self.hbar = float(hbar)
        self.k = grid.k
        self.energy = np.sqrt((c * hbar * self.k) ** 2 + (self.mass * c**2) ** 2)
        self.omega = self.energy / hbar
        self.hamiltonian = (c * hbar * self.k)[:, None, None] * SIGMA_X + (self.mass * c**2) * SIGMA_Z
        unit = self.hamiltonian / self.energy[:, None, None]
        self.p_plus = 0.5 * (SIGMA_0 + unit)
        self.p_minus = 0.5 * (SIGMA_0 - unit)
        self._unitaries: dict[float, np.ndarray] = {}

    def __repr__(self):
        return f"ModePropagator(n={self.grid.n}, L={self.grid.length}, mass={self.mass})"

    def unitary(self, dt: float) -> np.ndarray:
        """Stack of per-mode ``exp(-i H dt/hbar)``, shape ``(n, 2, 2)``."""
        dt = float(dt)
        u = self._unitaries.get(dt)
        if u is None:
            u = mat2_exp_unitary(self.hamiltonian, dt / self.hbar)
            if len(self._unitaries) > 64:
                self._unitaries.clear()
            self._unitaries[dt] = u
        return u

    def projector(self, sign: int) -> np.ndarray:
        if sign not in (1, -1):
            raise ConfigurationError(f"energy sign must be +1 or -1, got {sign}")
        return self.p_plus if sign > 0 else self.p_minus


def build_modes(grid: Grid1D, m: float = 1.0, c: float = 1.0, hbar: float = 1.0) -> ModePropagator:
    return ModePropagator(grid, m, c, hbar)


def to_modes(psi: SpinorField2) -> np.ndarray:
    return dft_forward(psi.values)


def from_modes(spectrum: np.ndarray) -> np.ndarray:
    return dft_inverse(spectrum)


def apply_modewise(matrices: np.ndarray, psi: SpinorField2) -> np.ndarray:
    """Multiply every mode spinor by its 2x2 matrix and return position values."""
    spec = to_modes(psi)
    out = np.einsum("kij,jk->ik", matrices, spec)
    return from_modes(out)


def _check(psi: SpinorField2, modes: ModePropagator) -> None:
    if psi.grid != modes.grid:
        raise ConfigurationError("field and propagator live on different grids")


def evolve(psi: SpinorField2, dt: float, modes: ModePropagator) -> SpinorField2:
    """Advance ``psi`` by ``dt`` (negative ``dt`` runs backwards)."""
    _check(psi, modes)
    if not math.isfinite(dt):
        raise ConfigurationError(f"time step must be finite, got {dt}")
    if dt == 0:
        return psi
    return psi.with_values(apply_modewise(modes.unitary(dt), psi), psi.t + dt)


def evolve_to(psi: SpinorField2, t: float, modes: ModePropagator) -> SpinorField2:
    return evolve(psi, t - psi.t, modes)


def project(psi: SpinorField2, modes: ModePropagator, sign: int) -> SpinorField2:
    _check(psi, modes)
    return psi.with_values(apply_modewise(modes.projector(sign), psi))


def project_positive(psi: SpinorField2, modes: ModePropagator) -> SpinorField2:
    return project(psi, modes, +1)


def project_negative(psi: SpinorField2, modes: ModePropagator) -> SpinorField2:
    return project(psi, modes, -1)


def energy_sign_content(psi: SpinorField2, modes: ModePropagator) -> tuple[float, float]:
    """Squared norms of the positive and negative energy parts."""
    return project_positive(psi, modes).norm2(), project_negative(psi, modes).norm2()


def require_energy_sign(psi: SpinorField2, modes: ModePropagator, sign: int,
                        what: str = "state", tol: float = 1e-10) -> None:
    """Raise :class:`EnergySignError` unless ``psi`` lies in the ``sign`` subspace."""
    pos, neg = energy_sign_content(psi, modes)
    total = pos + neg
    wrong = neg if sign > 0 else pos
    if total > 0 and wrong > tol * total:
        label = "positive" if sign > 0 else "negative"
        raise EnergySignError(
            f"{what} is not purely {label} energy (foreign fraction {wrong / total:.3e})")
