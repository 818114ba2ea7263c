"""Changes of spectral variable and the radical Omega(xi).

Conventions
-----------
* ``k = (h/2)(zeta + 1/zeta)``, ``sqrt(k^2 - h^2) = (h/2)(zeta - 1/zeta)``.
* ``zeta = xi / a`` and ``l (zt - 1/zt) = h (zeta - 1/zeta)``.
* ``sqrt((xi^2 + 1)(xi^2 + a^4))`` has cuts on ``[i, i a^2]`` and
  ``[-i a^2, -i]`` and behaves like ``xi^2`` at infinity. Points on a cut take
  the right-hand limit (``Re xi -> 0+``) unless ``side="minus"`` is passed.

Every boundary transform depends on zeta only through the real horizontal
wavenumber ``kappa = -i (h/2)(zeta - 1/zeta)``; helpers converting between
``kappa`` and the physical (outgoing) spectral points live here too.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BranchPointError, BranchSelectionError, DomainError
from .medium import Medium

# relative tolerance for deciding that a point sits on the imaginary axis
AXIS_TOL = 1e-12


class Plane(str, Enum):
    ZETA = "zeta"
    ZETA_TILDE = "zeta_tilde"
    XI = "xi"


class Sheet(str, Enum):
    EXTERIOR = "exterior"  # |zeta| >= 1, k -> inf+
    INTERIOR = "interior"  # |zeta| <= 1, k -> inf-


@dataclass(frozen=True)
class SpectralPoint:
    value: complex
    plane: Plane

    def __post_init__(self):
        if self.value == 0:
            raise DomainError("spectral points must be nonzero")


def _nonzero(z, what="argument"):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError(f"{what} must be nonzero")
    return z


def _out(z):
    return z.item() if np.ndim(z) == 0 else z


def k_from_zeta(z, h: float):
    z = _nonzero(z, "zeta")
    return _out(0.5 * h * (z + 1 / z))


def radical_from_zeta(z, h: float):
    """``sqrt(k^2 - h^2)`` expressed through zeta."""
    z = _nonzero(z, "zeta")
    return _out(0.5 * h * (z - 1 / z))


def zeta_from_k(k, h: float, sheet: Sheet | str = Sheet.EXTERIOR):
    """Invert ``k = (h/2)(zeta + 1/zeta)`` on the requested sheet.

    The two roots multiply to one; the exterior root has modulus >= 1. When
    both roots have unit modulus (``k`` on ``[-h, h]``) the exterior root is the
    one in the closed upper half plane, so ``k = 0`` gives ``zeta = i``.
    """
    sheet = Sheet(sheet)
    k = np.asarray(k, dtype=complex)
    s = k / h
    disc = np.sqrt(s * s - 1)
    r1 = s + disc
    r2 = s - disc
    m1, m2 = np.abs(r1), np.abs(r2)
    on_circle = np.isclose(m1, 1.0, rtol=0, atol=1e-12) & np.isclose(m2, 1.0, rtol=0, atol=1e-12)
    ext = np.where(m1 >= m2, r1, r2)
    ext = np.where(on_circle, np.where(r1.imag >= r2.imag, r1, r2), ext)
    if sheet is Sheet.EXTERIOR:
        return _out(ext)
    return _out(1 / ext)


def xi_from_zeta(z, a: float):
    z = _nonzero(z, "zeta")
    return _out(a * z)


def zeta_from_xi(xi, a: float):
    xi = _nonzero(xi, "xi")
    return _out(xi / a)


def _sqrt_cut_segment(xi, center: float, half: float, side: str):
    """``sqrt((xi - i(c-r))(xi - i(c+r)))`` with its cut on that vertical segment.

    Behaves like ``xi - i c`` at infinity.
    """
    w = xi - 1j * center
    v = w.imag
    on_axis = np.abs(w.real) <= AXIS_TOL * np.maximum(np.abs(xi), 1.0)
    on_cut = on_axis & (np.abs(v) < half)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt(1 + half * half / (w * w))
        # right-side limit of the principal root on the cut (see module notes)
        x = 1 - half * half / np.where(on_cut, v * v, 1.0)
        sgn = -np.sign(v) if side == "plus" else np.sign(v)
        root_cut = sgn * 1j * np.sqrt(np.abs(x))
    root = np.where(on_cut, root_cut, root)
    # off the cut but on the axis the argument is a nonnegative real
    root = np.where(on_axis & ~on_cut, np.sqrt(np.abs(1 - half * half / np.where(on_cut, 1.0, v * v))), root)
    return w * root


def radical_xi(xi, a: float, side: str = "plus"):
    """``sqrt((xi^2 + 1)(xi^2 + a^4))`` on the cut plane described above."""
    xi = _nonzero(xi, "xi")
    c = 0.5 * (1 + a * a)
    r = 0.5 * (a * a - 1)
    for bp in (1j, -1j, 1j * a * a, -1j * a * a):
        if np.any(np.abs(xi - bp) <= 1e-14 * abs(bp)):
            raise BranchPointError(f"xi = {bp} is a branch point of Omega")
    return _out(_sqrt_cut_segment(xi, c, r, side) * _sqrt_cut_segment(xi, -c, r, side))


def omega_fn(xi, a: float, side: str = "plus"):
    """``Omega(xi) = (a/xi) sqrt((xi^2+1)(xi^2+a^4))``, normalized as ``a xi`` at infinity."""
    xi = _nonzero(xi, "xi")
    return _out(a / xi * np.asarray(radical_xi(xi, a, side)))


def zeta_tilde_from_xi(xi, medium: Medium, side: str = "plus"):
    a, h, l = medium.a, medium.h, medium.l
    xi = _nonzero(xi, "xi")
    om = np.asarray(omega_fn(xi, a, side))
    return _out(h / (2 * a * l) * (xi - a * a / xi + om / a))


def xi_from_zeta_tilde(zt, medium: Medium, region: str = "A", tol: float = 1e-9):
    """Invert :func:`zeta_tilde_from_xi` for a single point.

    ``l (zt - 1/zt) = (h/a)(xi - a^2/xi)`` is a quadratic in xi with roots
    ``xi`` and ``-a^2/xi``. Roots that do not map back to ``zt`` are dropped;
    if both survive, the one whose variant matches ``region`` ("A" or "B")
    wins.
    """
    from .contours import classify_xi  # local import: contours depends on this module

    zt = complex(zt)
    if zt == 0:
        raise DomainError("zeta_tilde must be nonzero")
    a, h, l = medium.a, medium.h, medium.l
    m = l * (zt - 1 / zt) * a / h
    disc = np.sqrt(m * m + 4 * a * a)
    good = []
    for cand in ((m + disc) / 2, (m - disc) / 2):
        if cand == 0:
            continue
        if abs(cand.real) <= AXIS_TOL * abs(cand):
            cand = complex(0.0, cand.imag)
        try:
            back = zeta_tilde_from_xi(cand, medium)
        except BranchPointError:
            continue
        if abs(back - zt) <= tol * max(1.0, abs(zt)):
            good.append(cand)
    if not good:
        raise BranchSelectionError(f"no xi maps back to zeta_tilde = {zt!r}")
    if len(good) == 1:
        return good[0]
    tagged = []
    for g in good:
        try:
            tagged.append((classify_xi(g, medium), g))
        except Exception:
            tagged.append((None, g))
    match = [g for v, g in tagged if v is not None and v.value == region]
    if len(match) == 1:
        return match[0]
    raise BranchSelectionError(f"ambiguous xi preimage of zeta_tilde = {zt!r}: {good}")


# --- physical spectral points parametrized by the horizontal wavenumber ---

def vertical_wavenumber(kappa, k: float):
    """Outgoing ``sqrt(k^2 - kappa^2)``: positive for |kappa| < k, +i|.| otherwise."""
    kappa = np.asarray(kappa, dtype=complex)
    q = np.sqrt(k * k - kappa * kappa)
    q = np.where(q.imag < 0, -q, q)
    return _out(q)


def physical_zeta(kappa, k: float):
    """Point of the nonzero part of K (wavenumber ``k``) carrying ``kappa``.

    ``zeta = (q + i kappa)/k`` with the outgoing vertical wavenumber ``q``.
    Where ``q + i kappa`` cancels (large negative ``kappa``) the equivalent
    ``k^2 / (q - i kappa)`` is used instead.
    """
    kappa = np.asarray(kappa, dtype=complex)
    q = np.asarray(vertical_wavenumber(kappa, k))
    plus, minus = q + 1j * kappa, q - 1j * kappa
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(np.abs(plus) >= np.abs(minus), plus, k * k / minus) / k
    return _out(z)


def kappa_of(z, k: float):
    """Horizontal transform wavenumber ``-i (k/2)(z - 1/z)`` of a spectral point."""
    z = _nonzero(z)
    return _out(-0.5j * k * (z - 1 / z))
