"""Lax-pair oracle: spectral densities computed from a known field.

For a Helmholtz potential ``tau`` (wavenumber ``k``) the pair

    phi_z - i k(zeta) phi = Q,      phi_x + s(zeta) phi = Qt,

with ``k(zeta) = (k/2)(zeta + 1/zeta)`` and ``s(zeta) = (k/2)(zeta - 1/zeta)``,
has the solutions

    phi1(x, z) =  int_{-inf}^{x} exp(s (x' - x)) Qt(x', z) dx'
    phi2(x, z) = -int_{x}^{inf}  exp(s (x' - x)) Qt(x', z) dx'

and their difference ``exp(i k(zeta) z - s x) rho(zeta)`` defines the density
independently of any boundary data. Two choices of ``Q`` are offered:
``form="lax"`` pairs with ``Qt`` (the x- and z-equations are compatible) while
``form="printed"`` carries ``tau_x + tau_z`` instead of ``tau_x + i tau_z``
and is kept only to show that it fails the compatibility check.

On a contour point ``s = i kappa`` with real ``kappa``, so the x-integrals are
ordinary Fourier integrals and reuse the outgoing quadrature of
:mod:`rhelasto.boundary_data`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary_data import DEFAULT_ORDER, LineData, line_transform, wavesum_line_data
from .cylwave import WaveSum
from .errors import DomainError, ParameterError
from .spectral_maps import kappa_of, vertical_wavenumber

FORMS = ("lax", "printed")


@dataclass(frozen=True)
class PotentialField:
    """A Helmholtz potential ``tau`` with wavenumber ``k`` (``h`` or ``l``)."""

    tau: WaveSum
    k: float

    def __post_init__(self):
        if not self.k > 0:
            raise ParameterError("wavenumber must be positive")
        if any(abs(t.k - self.k) > 1e-14 * self.k for t in self.tau.terms):
            raise ParameterError("potential terms must share the pair wavenumber")


def q_sums(field: PotentialField, zeta: complex, form: str = "lax"):
    """``(Q, Qt)`` as wave sums at a fixed spectral point."""
    if form not in FORMS:
        raise ParameterError(f"form must be one of {FORMS}")
    zeta = complex(zeta)
    if zeta == 0:
        raise DomainError("zeta = 0 is not admissible")
    k, t = field.k, field.tau
    zc = 1j if form == "lax" else 1.0
    Q = t.scale(-1 / (zeta * k)) + t.dx().scale(-1 / k**2) + t.dz().scale(-zc / k**2)
    Qt = t.scale(1j / (zeta * k)) + t.dx().scale(-1j / k**2) + t.dz().scale(1 / k**2)
    return Q, Qt


def q1_from_values(tau, tau_x, tau_z, zeta: complex, k: float, form: str = "lax"):
    """``(Q, Qt)`` from pointwise values of a potential and its derivatives."""
    if form not in FORMS:
        raise ParameterError(f"form must be one of {FORMS}")
    zeta = complex(zeta)
    if zeta == 0:
        raise DomainError("zeta = 0 is not admissible")
    tau, tau_x, tau_z = (np.asarray(v, dtype=complex) for v in (tau, tau_x, tau_z))
    zc = 1j if form == "lax" else 1.0
    Q = -tau / (zeta * k) - (tau_x + zc * tau_z) / k**2
    Qt = 1j * tau / (zeta * k) - 1j * (tau_x + 1j * tau_z) / k**2
    return Q, Qt


def q1_terms(field: PotentialField, zeta: complex, x, z, form: str = "lax"):
    """Pointwise ``Q`` and ``Qt`` of a wave-sum potential."""
    t = field.tau
    return q1_from_values(t(x, z), t.dx()(x, z), t.dz()(x, z), zeta, field.k, form)


def lax_compatibility(field: PotentialField, zeta: complex, x, z, form: str = "lax"):
    """Cross-derivative residual ``Qt_z - Q_x - s Q - i k(zeta) Qt``.

    It vanishes for every ``zeta`` exactly when the two equations of the pair
    admit a common solution.
    """
    Q, Qt = q_sums(field, zeta, form)
    zeta = complex(zeta)
    s = 0.5 * field.k * (zeta - 1 / zeta)
    kz = 0.5 * field.k * (zeta + 1 / zeta)
    return Qt.dz()(x, z) - Q.dx()(x, z) - s * Q(x, z) - 1j * kz * Qt(x, z)


def _real_kappa(zeta, k):
    kap = complex(kappa_of(complex(zeta), k))
    if abs(kap.imag) > 1e-10 * max(1.0, abs(kap)):
        raise DomainError("phi solutions are only available where kappa(zeta) is real")
    return kap.real


def _half_lines(sum_: WaveSum, kap: float, x: float, z: float, order: int):
    data = wavesum_line_data(LineData, [sum_], z, "lax")
    ph = np.exp(-1j * kap * x)
    left = line_transform(data, np.array([kap]), order, upper=x)[0, 0]
    right = line_transform(data, np.array([kap]), order, lower=x)[0, 0]
    return ph * left, -ph * right


def phi_solutions(field: PotentialField, zeta: complex, x: float, z: float,
                  order: int = DEFAULT_ORDER):
    """``(phi1, phi2)`` at one point, for ``zeta`` on the contour (real kappa)."""
    kap = _real_kappa(zeta, field.k)
    _, Qt = q_sums(field, zeta)
    return _half_lines(Qt, kap, float(x), float(z), order)


def z_equation_residual(field: PotentialField, zeta: complex, x: float, z: float,
                        form: str = "lax", order: int = DEFAULT_ORDER) -> complex:
    """``phi1_z - i k(zeta) phi1 - Q`` with ``phi1_z`` differentiated under the integral."""
    kap = _real_kappa(zeta, field.k)
    Q, Qt = q_sums(field, zeta, form)
    phi1, _ = _half_lines(Qt, kap, float(x), float(z), order)
    phi1_z, _ = _half_lines(Qt.dz(), kap, float(x), float(z), order)
    zeta = complex(zeta)
    kz = 0.5 * field.k * (zeta + 1 / zeta)
    return complex(phi1_z - 1j * kz * phi1 - Q(x, z).item())


def rho_from_phi(field: PotentialField, zeta: complex, x: float, z: float,
                 order: int = DEFAULT_ORDER) -> complex:
    """Density from the jump ``phi1 - phi2`` at an interior point.

    The x-integral of ``Qt`` has the z-dependence ``exp(i q z)`` of the
    field's transform, with the outgoing vertical wavenumber ``q``; removing
    it together with ``exp(-i kappa x)`` leaves the density. On the zero parts
    of the contour the result vanishes.
    """
    kap = _real_kappa(zeta, field.k)
    p1, p2 = phi_solutions(field, zeta, x, z, order)
    q = complex(vertical_wavenumber(kap, field.k))
    return complex((p1 - p2) * np.exp(1j * kap * x - 1j * q * z))


def direct_rho(field: PotentialField, zeta, order: int = DEFAULT_ORDER):
    """``int exp(i kappa x) [ (i/2k)(zeta + 1/zeta) tau + tau_z / k^2 ](x, 0) dx``.

    Vectorised over contour points ``zeta``.
    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    kap = np.asarray(kappa_of(zeta, field.k), dtype=complex)
    if np.any(np.abs(kap.imag) > 1e-10 * np.maximum(1.0, np.abs(kap))):
        raise DomainError("direct densities need real kappa")
    data = wavesum_line_data(LineData, [field.tau, field.tau.dz()], 0.0, "lax")
    T = line_transform(data, kap.real, order)
    k = field.k
    return 0.5j / k * (zeta + 1 / zeta) * T[0] + T[1] / k**2


def direct_rho12(tau1: WaveSum, zeta, medium, order: int = DEFAULT_ORDER):
    """Density of the first potential (wavenumber ``h``) at ``zeta`` points."""
    return direct_rho(PotentialField(tau1, medium.h), zeta, order)


def direct_rho12_tilde(tau2: WaveSum, zeta_tilde, medium, order: int = DEFAULT_ORDER):
    """Density of the second potential (wavenumber ``l``) at zeta-tilde points."""
    return direct_rho(PotentialField(tau2, medium.l), zeta_tilde, order)
