import numpy as np
import pytest
from hypothesis import given, strategies as st

from rhelasto.errors import BranchPointError, DomainError
from rhelasto.spectral_maps import (
    Sheet, k_from_zeta, kappa_of, omega_fn, physical_zeta, radical_from_zeta, radical_xi,
    vertical_wavenumber, xi_from_zeta, xi_from_zeta_tilde, zeta_from_k, zeta_from_xi,
    zeta_tilde_from_xi,
)

from conftest import off_cut_samples

nonzero = st.complex_numbers(min_magnitude=0.05, max_magnitude=20, allow_nan=False, allow_infinity=False)


def test_k_from_zeta_examples():
    assert k_from_zeta(1j, 0.7) == pytest.approx(0)
    assert k_from_zeta(1, 0.7) == pytest.approx(0.7)
    assert k_from_zeta(2, 1.0) == pytest.approx(1.25)
    with pytest.raises(DomainError):
        k_from_zeta(0, 1.0)


def test_radical_examples():
    assert radical_from_zeta(1, 0.7) == pytest.approx(0)
    assert radical_from_zeta(1j, 0.7) == pytest.approx(0.7j)
    with pytest.raises(DomainError):
        radical_from_zeta(0, 1.0)


@given(nonzero)
def test_joukowski_identity(z):
    h = 0.577
    k = k_from_zeta(z, h)
    r = radical_from_zeta(z, h)
    scale = max(abs(k) ** 2, abs(r) ** 2, h * h)
    assert abs(k * k - r * r - h * h) <= 1e-13 * scale


def test_zeta_from_k_examples():
    h = 0.5
    assert zeta_from_k(h, h, "exterior") == pytest.approx(1)
    assert zeta_from_k(h, h, "interior") == pytest.approx(1)
    assert zeta_from_k(k_from_zeta(2j, h), h, Sheet.EXTERIOR) == pytest.approx(2j)
    assert zeta_from_k(0, h) == pytest.approx(1j)


@given(st.complex_numbers(max_magnitude=30, allow_nan=False, allow_infinity=False))
def test_sheet_contract(k):
    h = 0.8
    if abs(k.imag) < 1e-6 and abs(k.real) <= h:
        return
    ze = zeta_from_k(k, h, "exterior")
    zi = zeta_from_k(k, h, "interior")
    assert abs(ze) >= 1 - 1e-12
    assert abs(zi) <= 1 + 1e-12
    assert ze * zi == pytest.approx(1, rel=1e-10)
    assert k_from_zeta(ze, h) == pytest.approx(k, rel=1e-10, abs=1e-10)


def test_xi_zeta_maps(poisson, rng):
    a = poisson.a
    assert zeta_from_xi(1j * a, a) == pytest.approx(1j)
    assert zeta_from_xi(a, a) == pytest.approx(1)
    xi = off_cut_samples(rng, 200)
    assert np.abs(xi_from_zeta(zeta_from_xi(xi, a), a) - xi).max() <= 1e-15 * np.abs(xi).max()
    with pytest.raises(DomainError):
        zeta_from_xi(0, a)


def test_omega_real_point(poisson):
    a = poisson.a
    assert omega_fn(a, a) == pytest.approx(a * (a * a + 1), rel=1e-14)


def test_omega_asymptotic(poisson):
    a = poisson.a
    assert omega_fn(1e8, a) / (a * 1e8) == pytest.approx(1, rel=1e-12)


def test_omega_symmetries(poisson, rng):
    a = poisson.a
    xi = off_cut_samples(rng, 1000)
    om = omega_fn(xi, a)
    assert np.max(np.abs(omega_fn(-xi, a) + om) / np.abs(om)) <= 1e-12
    assert np.max(np.abs(omega_fn(a * a / xi, a) - om) / np.abs(om)) <= 1e-12


def test_branch_points_reported(poisson):
    a = poisson.a
    for bp in (1j, -1j, 1j * a * a, -1j * a * a):
        with pytest.raises(BranchPointError):
            radical_xi(bp, a)


def test_cut_sides_differ(poisson):
    a = poisson.a
    xi = 2.0j
    plus = radical_xi(xi, a, "plus")
    minus = radical_xi(xi, a, "minus")
    assert plus == pytest.approx(-minus)
    # the plus side is the limit from Re xi > 0
    assert radical_xi(xi + 1e-9, a) == pytest.approx(plus, rel=1e-6)


def test_uniformization_identities(poisson, rng):
    h, l, a = poisson.h, poisson.l, poisson.a
    xi = off_cut_samples(rng, 500)
    zt = zeta_tilde_from_xi(xi, poisson)
    z = xi / a
    lhs = l * (zt - 1 / zt)
    assert np.max(np.abs(lhs - h * (z - 1 / z)) / np.abs(lhs)) <= 1e-12
    rhs = h / (a * a * l) * omega_fn(xi, a)
    assert np.max(np.abs(zt + 1 / zt - rhs) / np.abs(rhs)) <= 1e-12


def test_zeta_tilde_large_xi(poisson):
    h, l, a = poisson.h, poisson.l, poisson.a
    xi = 1e7
    assert zeta_tilde_from_xi(xi, poisson) / (h / (a * l) * xi) == pytest.approx(1, rel=1e-6)


def test_xi_from_zeta_tilde_roundtrip(poisson, rng):
    xi = off_cut_samples(rng, 50, radius=4.0)
    for x in xi:
        zt = zeta_tilde_from_xi(x, poisson)
        back = xi_from_zeta_tilde(zt, poisson, "A" if abs(x) >= poisson.a else "B")
        assert zeta_tilde_from_xi(back, poisson) == pytest.approx(zt, rel=1e-10)


def test_physical_points_on_contour(poisson):
    kap = np.linspace(-4, 4, 81) + 1e-3
    for k in (poisson.h, poisson.l):
        z = physical_zeta(kap, k)
        assert np.allclose(kappa_of(z, k), kap, atol=1e-12)
        q = vertical_wavenumber(kap, k)
        assert np.all(np.imag(q) >= 0)
        assert np.allclose(0.5 * k * (z + 1 / z), q, atol=1e-12)
        # kappa is invariant under zeta -> -1/zeta (zero part of the contour)
        assert np.allclose(kappa_of(-1 / z, k), kap, atol=1e-12)
