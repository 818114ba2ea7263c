import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rhelasto.boundary_data import gaussian_tzz, transform_Phi, zero_tractions
from rhelasto.errors import NearPoleError
from rhelasto.global_relation import (
    D0_prefactor,
    Settings,
    coefficients_at,
    coefficients_zeta,
    coefficients_zeta_tilde,
    density_rho12,
    density_rho12_tilde,
    determinant,
    determinant_D0,
    kappa_solve,
    kappa_solve_data,
    rayleigh_mode_amplitudes,
    rayleigh_speed,
    scan_D0_root,
    secular,
    solvability_residual,
    solve_density,
    solve_system,
)
from rhelasto.lax_oracle import direct_rho12, direct_rho12_tilde
from rhelasto.reconstruction import rayleigh_terms
from rhelasto.spectral_maps import physical_zeta, zeta_tilde_from_xi
from rhelasto.verification import make_manufactured

from conftest import off_cut_samples


@pytest.fixture(scope="module")
def roots(poisson):
    return rayleigh_speed(poisson)


@pytest.fixture(scope="module")
def mixed(poisson):
    return make_manufactured("mixed", poisson)


# --- coefficients -----------------------------------------------------------

def test_coefficients_at_ia(poisson):
    c = coefficients_at(1j * poisson.a, poisson)
    assert abs(c.b) < 1e-15
    assert c.d == pytest.approx(1 / 6, abs=1e-14)


def test_xi_forms_match_zeta_forms(poisson, rng):
    xi = off_cut_samples(rng, 300, 8.0)
    c = coefficients_at(xi, poisson)
    b, d = coefficients_zeta(xi / poisson.a, poisson)
    assert np.max(np.abs(c.b - b)) < 1e-12 * np.max(np.abs(b))
    assert np.max(np.abs(c.d - d)) < 1e-12 * np.max(np.abs(d))
    zt = zeta_tilde_from_xi(xi, poisson)
    de, be = coefficients_zeta_tilde(zt)
    assert np.max(np.abs(c.delta - de) / np.abs(de)) < 1e-12
    assert np.max(np.abs(c.beta_c - be) / np.maximum(np.abs(be), 1e-3)) < 1e-12


def test_zeta_tilde_forms_closed():
    zt = np.array([0.4 + 1.1j, 2.0, -1.5j])
    de, be = coefficients_zeta_tilde(zt)
    assert np.allclose(de, -(zt**2 + zt**-2) / 4, rtol=0, atol=1e-15)
    assert np.allclose(be, 0.25j * (zt**2 - zt**-2), rtol=0, atol=1e-15)


# --- determinant and Rayleigh root -----------------------------------------

def test_determinant_identity_corrected_factor(poisson, rng):
    xi = off_cut_samples(rng, 1000, 6.0)
    D = np.asarray(determinant(xi, poisson))
    D0 = np.asarray(determinant_D0(xi, poisson))
    rel = np.abs(D - D0_prefactor(poisson) * D0) / np.abs(D)
    assert rel.max() < 1e-12


def test_printed_prefactor_is_off_by_a_constant(poisson, rng):
    xi = off_cut_samples(rng, 50, 6.0)
    ratio = np.asarray(determinant(xi, poisson)) / np.asarray(determinant_D0(xi, poisson))
    assert np.allclose(ratio, D0_prefactor(poisson), rtol=1e-12)
    assert not np.allclose(ratio, D0_prefactor(poisson, printed=True), rtol=1e-3)


def test_rayleigh_speed_poisson(poisson, roots):
    assert roots.c_ratio == pytest.approx(0.919402, abs=1e-5)
    assert 0 < roots.c < poisson.beta_s < poisson.alpha
    assert roots.xi_c.real == 0 and roots.xi_c.imag == pytest.approx(10.951, abs=1e-3)
    conj = roots.xi_c_conj
    assert abs(conj.real) < 1e-15 and -1 < conj.imag < 0
    assert max(roots.residuals) < 1e-10
    assert abs(determinant(roots.xi_c, poisson)) < 1e-10


def test_secular_endpoints(poisson):
    assert secular(0.0, poisson) == pytest.approx(0.0, abs=1e-15)
    assert secular(poisson.beta_s, poisson) == pytest.approx(1.0, abs=1e-14)


def test_D0_scan_single_sign_change(poisson, roots):
    a2 = poisson.a**2
    t = np.linspace(a2 * (1 + 1e-9), 4 * a2, 2001)
    vals = np.asarray(determinant_D0(1j * t, poisson))
    assert np.max(np.abs(vals.imag)) < 1e-9 * np.max(np.abs(vals.real))
    assert np.count_nonzero(np.diff(np.sign(vals.real))) == 1
    xs = scan_D0_root(poisson)
    assert abs(xs - roots.xi_c) / abs(roots.xi_c) < 1e-6


def test_k_form_report(roots):
    assert roots.k_form["rel_discrepancy"] < 1e-10


# --- the 2x2 solve ---------------------------------------------------------

def test_solve_system_zero_rhs(poisson):
    p1, p2 = solve_system(np.array([0.5 + 2j, -1 + 0.3j]), "A", 0, 0, poisson)
    assert np.all(p1 == 0) and np.all(p2 == 0)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0.1, 5), st.floats(-3, 3),
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.sampled_from(["A", "B"]),
)
def test_solve_system_back_substitution(re, im, f1, f2, variant):
    from rhelasto.medium import Medium

    m = Medium.poisson_solid()
    xi = complex(re, im)
    p1, p2 = solve_system(xi, variant, f1, f2, m)
    c = coefficients_at(xi, m)
    sb = -1.0 if variant == "A" else 1.0
    r1 = sb * c.b * p1 + c.d * p2 - f1
    r2 = c.delta * p1 - c.beta_c * p2 - f2
    scale = max(abs(f1), abs(f2), 1.0) * max(1.0, abs(c.b), abs(c.d), abs(c.delta), abs(c.beta_c))
    assert max(abs(r1), abs(r2)) <= 1e-13 * scale * max(1.0, abs(p1), abs(p2))


def test_solve_system_near_pole(poisson, roots):
    with pytest.raises(NearPoleError):
        solve_system(roots.xi_c, "A", 1.0, 1.0, poisson)


def test_kappa_solve_zero_data(poisson):
    ks = kappa_solve(np.array([-0.3, 0.1, 0.9]), np.zeros((4, 3), complex), poisson)
    assert np.all(ks.Phi1 == 0) and np.all(ks.Phi2 == 0)


def test_manufactured_phi_matches_surface_displacements(poisson, mixed):
    data, sol = mixed
    kap = np.array([-0.4, -0.05, 0.2, 0.45, 0.9])
    ks = kappa_solve_data(kap, data, poisson)
    P1, P2 = transform_Phi(sol.surface_displacements(), ks.xi, poisson)
    scale = max(np.abs(P1).max(), np.abs(P2).max())
    assert np.abs(ks.Phi1 - P1).max() < 1e-5 * scale
    assert np.abs(ks.Phi2 - P2).max() < 1e-5 * scale


# --- solvability and densities --------------------------------------------

def test_solvability_zero_data(poisson, roots):
    assert solvability_residual(zero_tractions(), roots, poisson) == (0, 0)


def test_solvability_manufactured(poisson, roots, mixed):
    data, _ = mixed
    dens = solve_density(data, poisson)
    r = solvability_residual(data, roots, poisson)
    assert max(abs(v) for v in r) < 1e-5 * dens.scale()


def test_density_zero_data(poisson):
    dens = solve_density(zero_tractions(), poisson)
    assert dens.scale() == 0
    assert dens.amplitudes == (0, 0, 0, 0)
    assert dens.zero_part_max == 0


def test_density_zero_parts_and_oracle(poisson, mixed):
    data, sol = mixed
    dens = solve_density(data, poisson, Settings(), x_extent=2 / poisson.h)
    scale = dens.scale()
    assert dens.zero_part_max < 1e-6 * scale
    assert max(abs(c) for c in dens.amplitudes) < 1e-6 * scale
    idx = np.linspace(0, dens.rho.nodes.size - 1, 50).astype(int)
    nodes = dens.rho.nodes[idx]
    ref = direct_rho12(sol.tau1, nodes, poisson)
    assert np.abs(dens.rho.rho[idx] - ref).max() < 1e-5 * np.abs(ref).max()
    idx = np.linspace(0, dens.rho_tilde.nodes.size - 1, 50).astype(int)
    nodes = dens.rho_tilde.nodes[idx]
    ref = direct_rho12_tilde(sol.tau2, nodes, poisson)
    assert np.abs(dens.rho_tilde.rho[idx] - ref).max() < 1e-5 * np.abs(ref).max()


def test_density_functions_on_zero_parts(poisson, mixed):
    data, _ = mixed
    kap = np.linspace(-1.5, 1.5, 11) + 1e-3
    # reflected physical points lie where the density vanishes
    zr = -1 / physical_zeta(kap, poisson.h)
    ztr = -1 / physical_zeta(kap, poisson.l)
    full = np.abs(density_rho12(data, physical_zeta(kap, poisson.h), poisson)).max()
    assert np.abs(density_rho12(data, zr, poisson)).max() < 1e-6 * full
    assert np.abs(density_rho12_tilde(data, ztr, poisson)).max() < 1e-6 * full


def test_gaussian_solvability(poisson):
    dens = solve_density(gaussian_tzz(1.0, 1 / poisson.h), poisson)
    assert dens.scale() > 0
    # the Gaussian load excites Rayleigh waves: amplitudes are nonzero
    assert max(abs(c) for c in dens.amplitudes) > 1e-3 * dens.scale()


# --- pure Rayleigh modes ---------------------------------------------------

@pytest.mark.parametrize("direction", [1, -1])
def test_rayleigh_mode_traction_free(poisson, direction):
    dens = solve_density(zero_tractions(), poisson)
    amps = rayleigh_mode_amplitudes(poisson, direction)
    x = np.linspace(-5, 5, 31) / poisson.h
    surf = rayleigh_terms(x, np.zeros_like(x), amps, dens, ("t_xz", "t_zz", "tau1"))
    scale = poisson.lam2mu * poisson.h**2 * np.abs(surf["tau1"]).max()
    assert np.abs(surf["t_xz"]).max() < 1e-6 * scale
    assert np.abs(surf["t_zz"]).max() < 1e-6 * scale
    ratio = amps[2] / amps[0] if direction == 1 else amps[3] / amps[1]
    assert abs(ratio.real) < 1e-10 and abs(ratio.imag) == pytest.approx(4.40367, abs=1e-4)


def test_rayleigh_mode_bad_direction(poisson):
    with pytest.raises(ValueError):
        rayleigh_mode_amplitudes(poisson, 2)
