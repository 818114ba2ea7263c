import numpy as np
import pytest

from rhelasto.cylwave import CylField, WaveSum


def _field():
    return WaveSum((CylField(0.8, 0.3, -1.0, {0: 1.0, 2: 0.3j, -1: 0.5}),))


def test_derivatives_match_finite_differences():
    f = _field()
    x, z = np.array([0.4, -1.3, 2.0]), np.array([0.5, 1.1, 0.2])
    d = 1e-5
    fx = (f(x + d, z) - f(x - d, z)) / (2 * d)
    fz = (f(x, z + d) - f(x, z - d)) / (2 * d)
    assert np.allclose(f.dx()(x, z), fx, rtol=1e-7, atol=1e-9)
    assert np.allclose(f.dz()(x, z), fz, rtol=1e-7, atol=1e-9)


def test_helmholtz_exact():
    f = _field()
    k = 0.8
    x, z = np.linspace(-3, 3, 7), np.linspace(0.1, 2, 7)
    lap = f.dx().dx()(x, z) + f.dz().dz()(x, z)
    assert np.max(np.abs(lap + k * k * f(x, z))) < 1e-12 * np.abs(f(x, z)).max() * 10


def test_envelope_strips_phase():
    f = _field()
    x = np.array([30.0, 200.0])
    z = 0.5
    for side in (1, -1):
        xs = side * x
        env = f(xs, z, envelope_side=side)
        assert np.allclose(env * np.exp(1j * side * 0.8 * xs), f(xs, z), rtol=1e-12)


def test_complex_abscissa_decays():
    f = _field()
    # moving up into Im x > 0 on the right tail damps exp(i k x)
    v = np.abs(f(np.array([20 + 0j, 20 + 20j]), 0.0))
    assert v[1] < 1e-5 * v[0]


def test_add_and_scale():
    a = CylField(1.0, 0, -1, {0: 1.0})
    s = WaveSum((a,)) + WaveSum((a.scale(2.0),))
    assert len(s.terms) == 1 and s.terms[0].coeffs[0] == 3.0
    with pytest.raises(ValueError):
        a + CylField(2.0, 0, -1)
    assert s.wavenumbers == [1.0]
