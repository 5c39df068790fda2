import math
import warnings

import numpy as np
import pytest

from rsidirac.errors import BoundaryContaminationError, ConfigurationError, DegenerateWeightError, DomainError
from rsidirac.field import (
    Grid1D, SpinorField2, check_boundary, gaussian_initial, gaussian_profile, inner_product,
    mean_position, probability_current, probability_density,
)
from rsidirac.propagator import evolve

AMP = (1 / (32 * math.pi)) ** 0.25


def test_grid_layout(grid):
    x = grid.x
    assert grid.dx == 0.125
    assert x[0] == -128.0 and x[grid.n // 2] == 0.0
    assert np.all(np.diff(x) > 0)


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        Grid1D(1000, 256.0)
    with pytest.raises(ConfigurationError):
        Grid1D(64, -1.0)


def test_reflect_maps_x_to_minus_x(grid):
    assert np.array_equal(grid.reflect(grid.x)[1:], -grid.x[1:])


def test_gaussian_value_at_origin(grid):
    g = gaussian_initial(grid)
    j0 = grid.n // 2
    assert abs(g.values[0, j0] - AMP) < 1e-15 and abs(g.values[1, j0] - AMP) < 1e-15
    assert abs(AMP - 0.31580) < 1e-5


def test_gaussian_is_normalised_and_even(grid):
    g = gaussian_initial(grid)
    assert abs(g.norm2() - 1) < 1e-12
    j = grid.n // 2
    assert g.values[0, j + 32] == g.values[0, j - 32]   # x = +-4


def test_gaussian_rejects_short_box():
    with pytest.raises(BoundaryContaminationError):
        gaussian_initial(Grid1D(256, 32.0))


def test_self_overlap_is_one(grid):
    g = gaussian_initial(grid)
    assert abs(inner_product(g, g) - 1) < 1e-12


def test_orthogonal_spinors(grid):
    f = gaussian_profile(grid)
    up = SpinorField2.from_profile(grid, f, (1, 0))
    down = SpinorField2.from_profile(grid, f, (0, 1))
    assert inner_product(up, down) == 0


def test_inner_product_conjugate_symmetry(grid, rng):
    f = gaussian_profile(grid)
    a = SpinorField2.from_profile(grid, f * np.exp(1j * grid.x), rng.standard_normal(2) + 1j)
    b = SpinorField2.from_profile(grid, f, rng.standard_normal(2) - 2j)
    assert abs(inner_product(a, b) - np.conj(inner_product(b, a))) < 1e-15


def test_inner_product_grid_mismatch(grid):
    other = Grid1D(1024, 256.0)
    with pytest.raises(ConfigurationError):
        inner_product(gaussian_initial(grid), gaussian_initial(other))


def test_inner_product_warns_on_time_tag_mismatch(grid, modes):
    g = gaussian_initial(grid)
    with pytest.warns(UserWarning):
        inner_product(g, evolve(g, 1.0, modes))


def test_density_at_origin_and_integral(grid):
    rho = probability_density(gaussian_initial(grid))
    assert abs(rho[grid.n // 2] - 2 / math.sqrt(32 * math.pi)) < 1e-15
    assert abs(rho[grid.n // 2] - 0.19947) < 5e-6
    assert abs(np.sum(rho) * grid.dx - 1) < 1e-12


def test_density_of_zero_field(grid):
    assert not np.any(probability_density(SpinorField2.zeros(grid)))


def test_density_nonnegative_and_matches_overlap(grid, rng):
    v = rng.standard_normal((2, grid.n)) + 1j * rng.standard_normal((2, grid.n))
    psi = SpinorField2(grid, v)
    rho = probability_density(psi)
    assert np.all(rho >= 0)
    ip = inner_product(psi, psi)
    assert abs(ip.imag) < 1e-13 * ip.real
    assert abs(ip.real - np.sum(rho) * grid.dx) < 1e-13 * ip.real


def test_current_of_default_state(grid):
    j = probability_current(gaussian_initial(grid))
    f = gaussian_profile(grid)
    assert np.allclose(j, 2 * f**2, rtol=0, atol=1e-16)
    assert abs(np.sum(j) * grid.dx - 1) < 1e-12


def test_current_vanishes_for_pure_upper_or_phase_i(grid):
    f = gaussian_profile(grid)
    assert not np.any(probability_current(SpinorField2.from_profile(grid, f, (1, 0))))
    assert np.max(np.abs(probability_current(SpinorField2.from_profile(grid, f, (1, 1j))))) == 0


def test_mean_position_cases(grid):
    assert abs(mean_position(probability_density(gaussian_initial(grid)), grid)) < 1e-12
    w = np.zeros(grid.n)
    j = grid.n // 2 + 24          # x = 3
    w[j] = 1
    assert mean_position(w, grid) == 3.0
    # translation equivariance
    assert abs(mean_position(np.roll(w, 1), grid) - (3.0 + grid.dx)) < 1e-15


def test_mean_position_errors(grid):
    with pytest.raises(DegenerateWeightError):
        mean_position(np.zeros(grid.n), grid)
    with pytest.raises(DomainError):
        mean_position(-np.ones(grid.n), grid)


def test_mean_position_after_quarter_zbw_period(grid, modes):
    # regression baseline for the forward pipeline, not an external value
    psi = evolve(gaussian_initial(grid), math.pi / 2, modes)
    x = mean_position(probability_density(psi), grid)
    assert abs(x - 0.04688650323868737) < 1e-12


def test_boundary_guard(grid):
    v = np.zeros((2, grid.n), complex)
    v[0, grid.n // 2] = 1
    check_boundary(v, 0.0)
    v[1, 3] = 1e-6
    with pytest.raises(BoundaryContaminationError, match="t=2.5"):
        check_boundary(v, 2.5)


def test_fields_are_immutable(grid):
    g = gaussian_initial(grid)
    with pytest.raises(ValueError):
        g.values[0, 0] = 1
    with pytest.raises(Exception):
        g.t = 3.0


def test_rejects_non_finite(grid):
    v = np.zeros((2, grid.n), complex)
    v[0, 0] = np.nan
    with pytest.raises(DomainError):
        SpinorField2(grid, v)
