import numpy as np
import pytest

from rhelasto.boundary_data import combine, gaussian_txz, gaussian_tzz, zero_tractions
from rhelasto.errors import DomainError, ParameterError
from rhelasto.global_relation import Settings, solve_density
from rhelasto.reconstruction import (
    add_rayleigh_terms,
    boundary_values,
    displacements_at,
    evaluate_grid,
    evaluate_points,
    phi_at,
    rayleigh_exponents,
    stresses_at,
    tau1_at,
)
from rhelasto.verification import make_manufactured


@pytest.fixture(scope="module")
def mixed(poisson):
    data, sol = make_manufactured("mixed", poisson)
    dens = solve_density(data, poisson, Settings(), x_extent=2 / poisson.h)
    return data, sol, dens


@pytest.fixture(scope="module")
def zero_density(poisson):
    return solve_density(zero_tractions(), poisson)


def grid(medium, n=21):
    h = medium.h
    return np.linspace(-2, 2, n) / h, np.linspace(0.5, 2, n) / h


def test_zero_density_gives_zero_fields(poisson, zero_density):
    x, z = grid(poisson, 5)
    g = evaluate_grid(zero_density, x, z)
    for v in g.values.values():
        assert np.all(v == 0)


@pytest.mark.parametrize("field", ["tau1", "tau2", "u", "w", "t_xz", "t_zz"])
def test_manufactured_fields(poisson, mixed, field):
    _, sol, dens = mixed
    x, z = grid(poisson)
    g = evaluate_grid(dens, x, z, (field,))
    X, Z = np.meshgrid(x, z)
    ref = getattr(sol, field)(X, Z)
    assert np.linalg.norm(g.values[field] - ref) / np.linalg.norm(ref) < 1e-3


def test_single_point_helpers(poisson, mixed):
    _, sol, dens = mixed
    x, z = 0.3 / poisson.h, 1.1 / poisson.h
    assert tau1_at(x, z, dens) == pytest.approx(complex(sol.tau1(x, z)), rel=1e-4)
    u, w = displacements_at(x, z, dens)
    assert u == pytest.approx(complex(sol.u(x, z)), rel=1e-4)
    assert w == pytest.approx(complex(sol.w(x, z)), rel=1e-4)
    txz, tzz = stresses_at(np.array([x, -x]), np.array([z, z]), dens)
    assert txz.shape == (2,)
    assert tzz[0] == pytest.approx(complex(sol.t_zz(x, z)), rel=1e-4)


def test_divergence_closure(poisson, mixed):
    """Half the divergence of the displacement is the first potential."""
    _, _, dens = mixed
    h = poisson.h
    x0, z0, s = 0.2 / h, 1.0 / h, 1e-3 / h
    f = lambda x, z: evaluate_points(dens, x, z, ("u", "w", "tau1"))
    ux = (f(x0 + s, z0)["u"] - f(x0 - s, z0)["u"]) / (2 * s)
    wz = (f(x0, z0 + s)["w"] - f(x0, z0 - s)["w"]) / (2 * s)
    tau1 = f(x0, z0)["tau1"]
    assert abs((ux + wz) / 2 - tau1) < 1e-6 * abs(tau1)


def test_add_rayleigh_terms_zero_is_identity(poisson, mixed):
    _, _, dens = mixed
    x, z = grid(poisson, 5)
    g = evaluate_grid(dens, x, z)
    g2 = add_rayleigh_terms(g, 0, 0, 0, 0, dens)
    for f in g.values:
        assert np.array_equal(g.values[f], g2.values[f])
    assert g2.rayleigh_amplitudes == g.rayleigh_amplitudes


def test_add_rayleigh_terms_accumulates(poisson, zero_density):
    x, z = grid(poisson, 5)
    g = evaluate_grid(zero_density, x, z, ("tau1",))
    g2 = add_rayleigh_terms(g, 1.0, 0, 0, 0, zero_density)
    assert g2.rayleigh_amplitudes[0] == 1.0
    assert np.abs(g2.values["tau1"]).max() > 0


def test_rayleigh_exponent_signs(poisson, zero_density):
    ip, is_, ik = rayleigh_exponents(zero_density)
    # decay into the solid, phase advancing with x at the Rayleigh wavenumber
    assert ip.real < 0 and is_.real < 0
    assert abs(ip.imag) < 1e-12 and abs(is_.imag) < 1e-12
    assert ik.imag == pytest.approx(poisson.omega / zero_density.roots.c)


def test_linearity(poisson):
    h = poisson.h
    d1 = gaussian_tzz(1.0, 1 / h)
    d2 = gaussian_txz(0.5, 0.8 / h, 0.3 / h)
    both = combine(d1, d2)
    x, z = np.linspace(-2, 2, 7) / h, np.full(7, 1.0 / h)
    vals = [evaluate_points(solve_density(d, poisson, x_extent=2 / h), x, z) for d in (d1, d2, both)]
    for f in vals[0]:
        s = vals[0][f] + vals[1][f]
        assert np.abs(vals[2][f] - s).max() <= 1e-10 * np.abs(s).max()


def test_thread_count_does_not_change_values(poisson, mixed):
    _, _, dens = mixed
    x, z = grid(poisson, 13)
    a = evaluate_grid(dens, x, z, threads=1)
    b = evaluate_grid(dens, x, z, threads=4)
    for f in a.values:
        assert np.array_equal(a.values[f], b.values[f])


def test_points_must_be_inside(mixed):
    _, _, dens = mixed
    with pytest.raises(DomainError):
        evaluate_points(dens, [0.0], [0.0])
    with pytest.raises(DomainError):
        evaluate_grid(dens, [0.0], [-1.0])
    with pytest.raises(ParameterError):
        evaluate_points(dens, [0.0], [1.0], ("pressure",))


def test_boundary_values_recover_tractions(poisson, mixed):
    data, sol, dens = mixed
    x = np.linspace(-3, 3, 13) / poisson.h
    b = boundary_values(dens, x)
    ref_xz = sol.t_xz(x, np.zeros_like(x))
    ref_zz = sol.t_zz(x, np.zeros_like(x))
    scale = max(np.abs(ref_xz).max(), np.abs(ref_zz).max())
    assert np.abs(b["t_xz"] - ref_xz).max() < 1e-3 * scale
    assert np.abs(b["t_zz"] - ref_zz).max() < 1e-3 * scale


def test_phi_at_zero_density(zero_density):
    assert phi_at(2.0 + 2.0j, 0.0, 1.0, zero_density) == 0


def test_phi_at_decays_far_from_contour(poisson, mixed):
    _, _, dens = mixed
    near = abs(phi_at(3.0 + 3.0j, 0.0, 1.0 / poisson.h, dens))
    far = abs(phi_at(1e3 * (1 + 1j) / np.sqrt(2), 0.0, 1.0 / poisson.h, dens))
    assert far < near and far < 1e-2 * dens.scale()


def test_phi_at_rejects_contour_points(mixed):
    _, _, dens = mixed
    with pytest.raises(DomainError):
        phi_at(dens.rho.nodes[3], 0.0, 1.0, dens)
