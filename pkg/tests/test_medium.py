import math

import pytest
from hypothesis import given, strategies as st

from rhelasto import Medium, derive_medium
from rhelasto.errors import ParameterError


def test_poisson_values(poisson):
    assert poisson.h == pytest.approx(1 / math.sqrt(3), rel=1e-15)
    assert poisson.l == pytest.approx(1.0, rel=1e-15)
    assert poisson.l / poisson.h == pytest.approx(math.sqrt(3), rel=1e-15)
    assert poisson.a == pytest.approx(math.sqrt(3) + math.sqrt(2), rel=1e-15)
    assert poisson.a == pytest.approx(3.146264, abs=1e-6)


def test_lambda_zero_limit():
    m = derive_medium(1e-300, 1.0, 1.0, 1.0)
    assert (m.l / m.h) ** 2 == pytest.approx(2.0, rel=1e-14)
    assert m.a == pytest.approx(math.sqrt(2) + 1, rel=1e-14)


@pytest.mark.parametrize("args", [(1, 0, 1, 1), (1, -1, 1, 1), (1, 1, 0, 1), (1, 1, 1, -2), (-3, 1, 1, 1)])
def test_invalid_parameters_rejected(args):
    with pytest.raises(ParameterError):
        derive_medium(*args)


def test_velocities(poisson):
    assert poisson.alpha == pytest.approx(poisson.omega / poisson.h)
    assert poisson.beta_s == pytest.approx(poisson.omega / poisson.l)
    assert poisson.alpha > poisson.beta_s


@given(
    lam=st.floats(-0.6, 50.0),
    mu=st.floats(0.01, 50.0),
    rho=st.floats(0.1, 10.0),
    omega=st.floats(0.1, 10.0),
)
def test_joukowski_invariant(lam, mu, rho, omega):
    if lam + 2 * mu <= 0 or lam <= -mu * 0.99:
        return
    m = Medium(lam, mu, rho, omega)
    assert 0 < m.h < m.l
    assert m.a > 1
    assert m.h * (m.a + 1 / m.a) / 2 == pytest.approx(m.l, rel=1e-13)
    assert m.h**2 == pytest.approx(rho * omega**2 / (lam + 2 * mu), rel=1e-13)
    assert m.l**2 == pytest.approx(rho * omega**2 / mu, rel=1e-13)
