"""Outgoing cylindrical waves as sums of angular harmonics.

A :class:`CylField` is ``sum_n c_n H_n(k r) e^{i n phi}`` about a source point,
with ``r e^{i phi} = (x - x0) + i (z - z0)``. Writing ``e^{+-i phi}`` as
``((x - x0) +- i (z - z0)) / r`` keeps every term analytic in complex ``x``,
which the rotated x-quadrature relies on.

Cartesian derivatives act exactly on the harmonic coefficients through
``D+ = d/dx + i d/dz`` and ``D- = d/dx - i d/dz``::

    D+ [H_n e^{i n phi}] = -k H_{n+1} e^{i(n+1)phi}
    D- [H_n e^{i n phi}] =  k H_{n-1} e^{i(n-1)phi}
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bessel import hankel1_orders


@dataclass(frozen=True)
class CylField:
    k: float
    x0: float
    z0: float
    coeffs: dict = field(default_factory=lambda: {0: 1.0})

    def _map(self, fn):
        out = {}
        for n, c in self.coeffs.items():
            for m, f in fn(n):
                out[m] = out.get(m, 0) + c * f
        return CylField(self.k, self.x0, self.z0, {m: c for m, c in out.items() if c != 0})

    def dplus(self):
        return self._map(lambda n: [(n + 1, -self.k)])

    def dminus(self):
        return self._map(lambda n: [(n - 1, self.k)])

    def dx(self):
        return self._map(lambda n: [(n + 1, -self.k / 2), (n - 1, self.k / 2)])

    def dz(self):
        return self._map(lambda n: [(n + 1, -self.k / 2j), (n - 1, -self.k / 2j)])

    def scale(self, s):
        return CylField(self.k, self.x0, self.z0, {n: s * c for n, c in self.coeffs.items()})

    def __add__(self, other):
        if (other.k, other.x0, other.z0) != (self.k, self.x0, self.z0):
            raise ValueError("can only add harmonics about the same source and wavenumber")
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0) + c
        return CylField(self.k, self.x0, self.z0, out)

    def __call__(self, x, z, envelope_side: int = 0):
        """Evaluate at ``(x, z)``; ``envelope_side = +-1`` returns ``f * exp(-+ i k x)``."""
        x = np.asarray(x, dtype=complex)
        z = np.asarray(z, dtype=complex)
        x, z = np.broadcast_arrays(x, z)
        dx = x - self.x0
        dz = z - self.z0
        r = np.sqrt(dx * dx + dz * dz)
        if not self.coeffs:
            return np.zeros(x.shape, dtype=complex)
        nmax = max(abs(n) for n in self.coeffs)
        scaled = envelope_side != 0
        H = hankel1_orders(max(nmax, 1), self.k * r, scaled=scaled)
        ep = dx / r + 1j * dz / r
        em = dx / r - 1j * dz / r
        out = np.zeros(x.shape, dtype=complex)
        for n, c in self.coeffs.items():
            m = abs(n)
            hn = H[m] * ((-1) ** m if n < 0 else 1)
            ang = (ep if n >= 0 else em) ** m
            out = out + c * hn * ang
        if scaled:
            s = envelope_side
            sdx = s * dx
            # r - s*dx without cancellation
            with np.errstate(divide="ignore", invalid="ignore"):
                alt = dz * dz / (r + sdx)
            diff = np.where(sdx.real > 0, alt, r - sdx)
            out = out * np.exp(1j * self.k * (diff - s * self.x0))
        return out


@dataclass(frozen=True)
class WaveSum:
    """Sum of cylindrical fields with possibly different wavenumbers."""

    terms: tuple = ()

    def __call__(self, x, z, envelope_side: int = 0, k_only: float | None = None):
        x = np.asarray(x, dtype=complex)
        out = np.zeros(np.broadcast(x, np.asarray(z)).shape, dtype=complex)
        for t in self.terms:
            if k_only is None or t.k == k_only:
                out = out + t(x, z, envelope_side)
        return out

    def _each(self, fn):
        return WaveSum(tuple(fn(t) for t in self.terms))

    def dx(self):
        return self._each(lambda t: t.dx())

    def dz(self):
        return self._each(lambda t: t.dz())

    def scale(self, s):
        return self._each(lambda t: t.scale(s))

    def __add__(self, other):
        merged = list(self.terms)
        for t in other.terms:
            for i, m in enumerate(merged):
                if (m.k, m.x0, m.z0) == (t.k, t.x0, t.z0):
                    merged[i] = m + t
                    break
            else:
                merged.append(t)
        return WaveSum(tuple(merged))

    @property
    def wavenumbers(self):
        return sorted({t.k for t in self.terms})
