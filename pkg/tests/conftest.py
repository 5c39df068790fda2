import numpy as np
import pytest

from rsidirac.field import Grid1D
from rsidirac.propagator import build_modes


def naive_dft(values):
    """O(n^2) reference transform, same sign convention as dft_forward."""
    v = np.asarray(values, dtype=complex)
    n = v.shape[-1]
    j = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(j, j) / n)
    return v @ kernel.T


def taylor_expm(a, terms=30):
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for n in range(1, terms):
        term = term @ a / n
        out = out + term
    return out


@pytest.fixture(scope="session")
def grid():
    return Grid1D()


@pytest.fixture(scope="session")
def modes(grid):
    return build_modes(grid, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Continuum oracles for the sigma=2, spinor (1, 1) Gaussian.  |f^(k)|^2 is a
# normal density with sigma_k = 1/4; half-trace algebra of P+ and exp(-iHt)
# against the (1, 1) spinor reduces each amplitude to a 1-D k integral.
def _k_integral(func):
    from scipy.integrate import quad

    sk = 0.25
    gauss = lambda k: np.exp(-k**2 / (2 * sk**2)) / (sk * np.sqrt(2 * np.pi))
    re = quad(lambda k: gauss(k) * func(k).real, -3, 3, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    im = quad(lambda k: gauss(k) * func(k).imag, -3, 3, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    return complex(re, im)


def continuum_ci_amplitude(t, m=1.0):
    w = lambda k: np.sqrt(k**2 + m**2)
    return _k_integral(lambda k: np.cos(w(k) * t) - 1j * k * np.sin(w(k) * t) / w(k))


def continuum_rsi_amplitude(t, m=1.0):
    """Positive channel with both boundary projections renormalised to unit norm."""
    w = lambda k: np.sqrt(k**2 + m**2)
    return _k_integral(lambda k: (1 + k / w(k)) * np.exp(-1j * w(k) * t))
