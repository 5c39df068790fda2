"""Four-component free Dirac evolution for fields depending on x only.

With ``d_y = d_z = 0`` the Hamiltonian per mode is
``H4(k) = c hbar k alpha_x + m c**2 beta``.  The pairs (psi_1, psi_4) and
(psi_2, psi_3) then obey two copies of the two-component equation;
:func:`verify_reduction` checks that numerically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Grid1D, SpinorField2, _frozen, edge_ratio, gaussian_profile
from .numerics import SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z, dft_forward, dft_inverse
from .propagator import ModePropagator, build_modes, evolve

_ZERO2 = np.zeros((2, 2), dtype=complex)


def _alpha(sigma: np.ndarray) -> np.ndarray:
    return np.block([[_ZERO2, sigma], [sigma, _ZERO2]])


ALPHA_X = _alpha(SIGMA_X)
ALPHA_Y = _alpha(SIGMA_Y)
ALPHA_Z = _alpha(SIGMA_Z)
BETA = np.block([[SIGMA_0, _ZERO2], [_ZERO2, -SIGMA_0]])

# component order of the two decoupled blocks (0-based)
BLOCK_A = (0, 3)
BLOCK_B = (1, 2)


@dataclass(frozen=True)
class SpinorField4:
    grid: Grid1D
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 4, self.grid.n))

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)

    def edge_ratio(self) -> float:
        return edge_ratio(self.values)


@dataclass(frozen=True)
class BlockPair:
    block_a: SpinorField2
    block_b: SpinorField2


def hamiltonian4(k, m: float = 1.0, c: float = 1.0, hbar: float = 1.0, ky=0.0, kz=0.0) -> np.ndarray:
    """Per-mode ``c hbar (k.alpha) + m c^2 beta``; shape ``(len(k), 4, 4)``."""
    kx = np.atleast_1d(np.asarray(k, dtype=float))
    ky = np.broadcast_to(ky, kx.shape)
    kz = np.broadcast_to(kz, kx.shape)
    return (c * hbar * (kx[:, None, None] * ALPHA_X + ky[:, None, None] * ALPHA_Y
                        + kz[:, None, None] * ALPHA_Z) + m * c**2 * BETA)


def unitary4(k, dt: float, m: float = 1.0, c: float = 1.0, hbar: float = 1.0) -> np.ndarray:
    """``exp(-i H4 dt/hbar)`` per mode.

    alpha_x and beta anticommute and square to one, so ``H4**2 = E**2 I``
    and the exponential is ``cos(E dt/hbar) I - i sin(E dt/hbar) H4/E``.
    This uses no knowledge of the block structure.
    """
    h = hamiltonian4(k, m, c, hbar)
    energy = np.sqrt((c * hbar * np.asarray(k, dtype=float)) ** 2 + (m * c**2) ** 2)
    theta = energy * dt / hbar
    return (np.cos(theta)[:, None, None] * np.eye(4)
            - 1j * (np.sin(theta) / energy)[:, None, None] * h)


def evolve4(psi: SpinorField4, dt: float, m: float = 1.0, c: float = 1.0, hbar: float = 1.0) -> SpinorField4:
    if dt == 0:
        return psi
    u = unitary4(psi.grid.k, dt, m, c, hbar)
    spec = dft_forward(psi.values)
    out = dft_inverse(np.einsum("kij,jk->ik", u, spec))
    return SpinorField4(psi.grid, out, psi.t + dt)


def split_blocks(psi: SpinorField4) -> BlockPair:
    v = psi.values
    return BlockPair(SpinorField2(psi.grid, v[list(BLOCK_A)], psi.t),
                     SpinorField2(psi.grid, v[list(BLOCK_B)], psi.t))


def merge_blocks(blocks: BlockPair) -> SpinorField4:
    a, b = blocks.block_a, blocks.block_b
    v = np.empty((4, a.grid.n), dtype=complex)
    v[list(BLOCK_A)] = a.values
    v[list(BLOCK_B)] = b.values
    return SpinorField4(a.grid, v, a.t)


def verify_reduction(psi0: SpinorField4, dt: float, m: float = 1.0,
                     modes: ModePropagator | None = None) -> float:
    """Max pointwise gap between 4-spinor evolution and two independent 2-spinor evolutions."""
    if dt == 0:
        return 0.0
    modes = modes or build_modes(psi0.grid, m)
    full = split_blocks(evolve4(psi0, dt, m))
    parts = split_blocks(psi0)
    a = evolve(parts.block_a, dt, modes)
    b = evolve(parts.block_b, dt, modes)
    return max(full.block_a.max_abs_difference(a), full.block_b.max_abs_difference(b))


def embedded_gaussian(grid: Grid1D, block: str = "a") -> SpinorField4:
    """The sigma=2 Gaussian placed in one block, e.g. (f, 0, 0, f) for block ``a``."""
    f = gaussian_profile(grid)
    v = np.zeros((4, grid.n), dtype=complex)
    idx = BLOCK_A if block == "a" else BLOCK_B
    v[list(idx)] = f
    return SpinorField4(grid, v)


def random_bandlimited4(grid: Grid1D, rng: np.random.Generator, k_max: float = 2.0,
                        width: float = 6.0) -> SpinorField4:
    """Random smooth 4-spinor: band-limited noise under a Gaussian envelope."""
    k = grid.k
    spec = (rng.standard_normal((4, grid.n)) + 1j * rng.standard_normal((4, grid.n)))
    spec *= np.abs(k) <= k_max
    noise = dft_inverse(spec)
    env = np.exp(-grid.x**2 / (2 * width**2))
    v = noise * env
    v /= np.sqrt(np.sum(np.abs(v) ** 2) * grid.dx)
    return SpinorField4(grid, v)
