"""Surface tractions, surface displacements and their spectral transforms.

Every transform here is a Fourier integral ``int exp(i kappa x) f(x) dx`` in
disguise: a spectral point ``zeta`` enters only through the horizontal
wavenumber ``kappa = -i (h/2)(zeta - 1/zeta)`` (and likewise for zeta-tilde
with ``l`` and for xi with ``(h/2a)(xi - a^2/xi)``).

The x-quadrature depends on how the data decay:

``compact``
    Gauss-Legendre panels on the support.
``gaussian``
    Panels on ``center +- 6 width`` (tail below 1e-15).
``outgoing``
    Data behaving like ``exp(+-i k x) / sqrt|x|`` (surface traces of a buried
    cylindrical source). The real line is split into a middle interval and two
    tails that are rotated into the complex x-plane, up or down depending on
    the sign of ``kappa +- k``, so that the integrand decays exponentially.
    On the tails the data are evaluated through phase-stripped envelopes
    ``f(x) exp(-+ i k x)`` to avoid overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError
from .medium import Medium

DEFAULT_ORDER = 20


@dataclass(frozen=True)
class Decay:
    """How a data profile decays along the surface.

    kind : {"zero", "compact", "gaussian", "outgoing"}
    lo, hi : support bounds (compact)
    center, width : Gaussian envelope
    k, x0, depth : outgoing wavenumber, source abscissa and source depth
    """

    kind: str
    lo: float = 0.0
    hi: float = 0.0
    center: float = 0.0
    width: float = 1.0
    k: float = 0.0
    x0: float = 0.0
    depth: float = 1.0


@dataclass(frozen=True)
class LineData:
    """Several profiles sharing one decay description.

    ``evaluate(x)`` returns an array of shape ``(m, len(x))``; for outgoing
    data ``envelope(x, side)`` returns ``f(x) * exp(-i side k x)``. Composite
    data list their pieces in ``parts`` and have no evaluator of their own.
    """

    evaluate: Callable | None
    decay: Decay
    ncomp: int
    envelope: Callable | None = None
    parts: tuple = ()
    name: str = "custom"

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x))
        if self.parts:
            return sum(p(x) for p in self.parts)
        if self.decay.kind == "zero":
            return np.zeros((self.ncomp, x.size), dtype=complex)
        return np.asarray(self.evaluate(x), dtype=complex)


class TractionData(LineData):
    """Prescribed surface stresses ``T0_xz``, ``T0_zz`` and their x-derivatives.

    Component order of ``evaluate``: ``t_xz, t_zz, t_xz_dx, t_zz_dx``.
    """

    def t_xz(self, x):
        return self(x)[0]

    def t_zz(self, x):
        return self(x)[1]

    def t_xz_dx(self, x):
        return self(x)[2]

    def t_zz_dx(self, x):
        return self(x)[3]


class SurfaceDisplacements(LineData):
    """Surface displacements ``u(0, x)``, ``w(0, x)``."""

    def u0(self, x):
        return self(x)[0]

    def w0(self, x):
        return self(x)[1]


# --- presets ---

def zero_tractions() -> TractionData:
    return TractionData(None, Decay("zero"), 4, name="zero")


def _gaussian(amp, width, center):
    def g(x):
        s = (x - center) / width
        v = amp * np.exp(-s * s)
        return v, -2 * s / width * v

    return g


def gaussian_tzz(amplitude: float = 1.0, width: float = 1.0, center: float = 0.0) -> TractionData:
    """Normal load ``T0_zz = A exp(-((x - c)/w)^2)``, no shear."""
    if not width > 0:
        raise ParameterError("Gaussian width must be positive")
    g = _gaussian(amplitude, width, center)

    def ev(x):
        v, dv = g(x)
        z = np.zeros_like(v)
        return np.stack([z, v, z, dv])

    return TractionData(ev, Decay("gaussian", center=center, width=width), 4, name="gaussian_tzz")


def gaussian_txz(amplitude: float = 1.0, width: float = 1.0, center: float = 0.0) -> TractionData:
    """Shear load ``T0_xz = A exp(-((x - c)/w)^2)``, no normal stress."""
    if not width > 0:
        raise ParameterError("Gaussian width must be positive")
    g = _gaussian(amplitude, width, center)

    def ev(x):
        v, dv = g(x)
        z = np.zeros_like(v)
        return np.stack([v, z, dv, z])

    return TractionData(ev, Decay("gaussian", center=center, width=width), 4, name="gaussian_txz")


def central_diff6(y, dx):
    """Sixth-order first derivative on a uniform grid (one-sided near the ends)."""
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 7:
        raise ParameterError("at least 7 samples are needed for sixth-order differences")
    c = np.array([-1, 9, -45, 0, 45, -9, 1]) / 60.0
    d = np.empty(n)
    d[3:-3] = sum(c[j] * y[j : n - 6 + j] for j in range(7))
    # one-sided seven-point stencils for the three end nodes on each side
    for i in range(3):
        offs = np.arange(7) - i
        w = _fd_weights(offs)
        d[i] = w @ y[:7]
        d[n - 1 - i] = -(w @ y[::-1][:7])
    return d / dx


def _fd_weights(offsets):
    """First-derivative weights at 0 for the given integer offsets (Vandermonde)."""
    offsets = np.asarray(offsets, dtype=float)
    m = offsets.size
    A = np.vander(offsets, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[1] = 1.0
    return np.linalg.solve(A, rhs)


def sampled_tractions(x, t_xz, t_zz) -> TractionData:
    """Tractions from samples on a uniform grid, zero outside it.

    Values and sixth-order differenced derivatives are interpolated by cubic
    splines.
    """
    from scipy.interpolate import CubicSpline

    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 7:
        raise ParameterError("need at least 7 samples")
    dx = np.diff(x)
    if np.any(dx <= 0) or np.ptp(dx) > 1e-9 * abs(dx.mean()):
        raise ParameterError("sampled tractions must lie on an increasing uniform grid")
    h = dx.mean()
    cols = [np.asarray(t_xz, float), np.asarray(t_zz, float)]
    cols += [central_diff6(c, h) for c in cols]
    splines = [CubicSpline(x, c) for c in cols]
    lo, hi = x[0], x[-1]

    def ev(xx):
        xr = np.real(xx)
        inside = (xr >= lo) & (xr <= hi)
        return np.stack([np.where(inside, s(np.clip(xr, lo, hi)), 0.0) for s in splines])

    return TractionData(ev, Decay("compact", lo=lo, hi=hi, width=h), 4, name="sampled_csv")


def load_traction_csv(path) -> TractionData:
    """Read ``x, t_xz, t_zz`` columns (a header line is allowed)."""
    try:
        arr = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError:
        arr = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=1)
    if arr.shape[1] != 3:
        raise ParameterError(f"{path}: expected 3 columns x, t_xz, t_zz")
    return sampled_tractions(arr[:, 0], arr[:, 1], arr[:, 2])


def combine(*items: LineData, name: str = "sum") -> LineData:
    """Superpose data sets with the same component count."""
    flat = []
    for it in items:
        flat.extend(it.parts if it.parts else [it])
    flat = [f for f in flat if f.decay.kind != "zero"]
    cls = type(items[0])
    if not flat:
        return cls(None, Decay("zero"), items[0].ncomp, name=name)
    return cls(None, Decay("composite"), items[0].ncomp, parts=tuple(flat), name=name)


def wavesum_line_data(cls, sums, z: float = 0.0, name: str = "wavesum"):
    """Outgoing line data ``f(x, z)`` of cylindrical-wave sums at a fixed height.

    One part per wavenumber, so each part has a single outgoing phase rate.
    All terms of one wavenumber are assumed to share a source point.
    """
    parts = []
    for k in sorted({t.k for s in sums for t in s.terms}):
        src = next(t for s in sums for t in s.terms if t.k == k)

        def ev(x, k=k):
            return np.stack([s(x, z, k_only=k) for s in sums])

        def env(x, side, k=k):
            return np.stack([s(x, z, envelope_side=side, k_only=k) for s in sums])

        dec = Decay("outgoing", k=k, x0=src.x0, depth=abs(z - src.z0))
        parts.append(cls(ev, dec, len(sums), envelope=env, name=name))
    if not parts:
        return cls(None, Decay("zero"), len(sums), name=name)
    if len(parts) == 1:
        return parts[0]
    return combine(*parts, name=name)


# --- x-quadrature ---

def _gl_panels(lo, hi, dx, n):
    m = max(1, int(math.ceil((hi - lo) / dx)))
    x0, w0 = np.polynomial.legendre.leggauss(n)
    edges = np.linspace(lo, hi, m + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    w = (half[:, None] * w0[None, :]).ravel()
    return x, w


def _geometric_panels(s0, smax, n):
    edges = [0.0, s0]
    while edges[-1] < smax:
        edges.append(2 * edges[-1])
    edges = np.array(edges)
    x0, w0 = np.polynomial.legendre.leggauss(n)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x0).ravel(), (half[:, None] * w0).ravel()


def _apply(kappa, x, w, vals, chunk=256):
    """``sum_j w_j exp(i kappa x_j) vals[:, j]`` for every kappa (fixed order)."""
    out = np.empty((vals.shape[0], kappa.size), dtype=complex)
    for s in range(0, kappa.size, chunk):
        kc = kappa[s : s + chunk]
        E = np.exp(1j * kc[:, None] * x[None, :]) * w[None, :]
        for c in range(vals.shape[0]):
            out[c, s : s + chunk] = (E * vals[c][None, :]).sum(axis=1)
    return out


def _kmax_real(kappa):
    return float(np.max(np.abs(kappa))) if kappa.size else 0.0


def _transform_single(data: LineData, kappa, order, lower=-math.inf, upper=math.inf):
    d = data.decay
    n = order
    if d.kind == "zero":
        return np.zeros((data.ncomp, kappa.size), dtype=complex)
    km = _kmax_real(kappa)
    if d.kind in ("compact", "gaussian"):
        if d.kind == "compact":
            lo, hi, scale = d.lo, d.hi, max(d.width, 1e-300)
            scale = max(scale, (hi - lo) / 4000)
        else:
            lo, hi, scale = d.center - 6.5 * d.width, d.center + 6.5 * d.width, d.width / 2
        lo, hi = max(lo, lower), min(hi, upper)
        if hi <= lo:
            return np.zeros((data.ncomp, kappa.size), dtype=complex)
        dx = min(scale, 0.8 * n / km) if km > 0 else scale
        if np.any(np.abs(np.imag(kappa)) * max(abs(lo), abs(hi)) > 700):
            raise ConvergenceError("complex wavenumber too large for the data support")
        x, w = _gl_panels(lo, hi, dx, n)
        return _apply(kappa, x, w, data(x))
    if d.kind != "outgoing":
        raise ParameterError(f"unknown decay kind {d.kind!r}")
    if np.any(np.abs(np.imag(kappa)) > 1e-12 * np.maximum(np.abs(kappa), 1.0)):
        raise ConvergenceError("outgoing data only admit real transform wavenumbers")
    kappa = np.real(kappa).astype(float)
    k = d.k
    L = max(16.0 / k, 4.0 * abs(d.depth), 4.0)
    tails = []
    if math.isinf(lower) and math.isinf(upper):
        lo, hi = d.x0 - L, d.x0 + L
        tails = [(+1, hi), (-1, lo)]
    elif math.isinf(lower):
        lo, hi = min(d.x0 - L, upper), upper
        tails = [(-1, lo)]
    elif math.isinf(upper):
        lo, hi = lower, max(d.x0 + L, lower)
        tails = [(+1, hi)]
    else:
        lo, hi = lower, upper
    scale = min(abs(d.depth) / 2, 1.0 / k)
    dx = min(scale, 0.8 * n / (km + k))
    out = np.zeros((data.ncomp, kappa.size), dtype=complex)
    if hi > lo:
        x, w = _gl_panels(lo, hi, dx, n)
        out += _apply(kappa.astype(complex), x, w, data(x))
    # tails: the envelope f exp(-i side k x) varies slowly, phase rate kappa + side k
    for side, start in tails:
        g = kappa + side * k
        for sig in (+1, -1):
            mask = (np.sign(g) == sig) & (g != 0)
            if not np.any(mask):
                continue
            gam = np.abs(g[mask])
            s0 = min(0.5 / gam.max(), 0.5 / k)
            s, ws = _geometric_panels(s0, 46.0 / gam.min(), n)
            xt = start + 1j * sig * s
            env = np.asarray(data.envelope(xt, side), dtype=complex)
            # right tail adds int_0^inf f(start + i sig s) i sig ds, the left one subtracts it
            wt = ws * (1j * sig) * side
            km_ = kappa[mask]
            res = np.empty((data.ncomp, km_.size), dtype=complex)
            for j0 in range(0, km_.size, 256):
                kc = km_[j0 : j0 + 256]
                gc = kc + side * k
                E = np.exp(1j * gc[:, None] * xt[None, :]) * wt[None, :]
                for c in range(data.ncomp):
                    res[c, j0 : j0 + 256] = (E * env[c][None, :]).sum(axis=1)
            out[:, mask] += res
    return out


def line_transform(data: LineData, kappa, order: int = DEFAULT_ORDER,
                   lower: float = -math.inf, upper: float = math.inf):
    """Fourier transforms ``int exp(i kappa x) f_c(x) dx`` of every component.

    ``lower``/``upper`` restrict the integral to a half line or an interval.
    Returns an array of shape ``(ncomp,) + kappa.shape``.
    """
    kappa = np.asarray(kappa, dtype=complex)
    shape = kappa.shape
    flat = kappa.ravel()
    if data.parts:
        out = sum(_transform_single(p, flat, order, lower, upper) for p in data.parts)
    else:
        out = _transform_single(data, flat, order, lower, upper)
    return out.reshape((data.ncomp,) + shape)


# --- spectral transforms ---

def fourier_wavenumber_zeta(z, h: float):
    """Horizontal wavenumber ``kappa`` with kernel ``exp((h/2)(z - 1/z) x) = exp(i kappa x)``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise DomainError("zeta must be nonzero")
    k = -0.5j * h * (z - 1 / z)
    return k.item() if k.ndim == 0 else k


def fourier_wavenumber_xi(xi, medium: Medium):
    xi = np.asarray(xi, dtype=complex)
    if np.any(xi == 0):
        raise DomainError("xi must be nonzero")
    a = medium.a
    k = -0.5j * medium.h / a * (xi - a * a / xi)
    return k.item() if k.ndim == 0 else k


def _realify(kappa):
    """Drop round-off imaginary parts of wavenumbers that are real in exact arithmetic."""
    kappa = np.asarray(kappa, dtype=complex)
    tiny = np.abs(kappa.imag) <= 1e-13 * np.maximum(np.abs(kappa), 1.0)
    return np.where(tiny, kappa.real + 0j, kappa)


def F1_from_transforms(z, medium: Medium, That_zz, Dhat_xz):
    """``F1`` given the transforms of ``T0_zz`` and ``(T0_xz)_x`` at kappa(z)."""
    z = np.asarray(z, dtype=complex)
    h, l = medium.h, medium.l
    return (
        -1j / (4 * h * medium.lam2mu) * (z + 1 / z) * That_zz
        - Dhat_xz / (2 * l * l * medium.mu)
    )


def F2_from_transforms(zt, medium: Medium, That_xz, Dhat_zz):
    """``F2`` given the transforms of ``T0_xz`` and ``(T0_zz)_x`` at kappa(zt)."""
    zt = np.asarray(zt, dtype=complex)
    l, mu = medium.l, medium.mu
    return -Dhat_zz / (2 * mu * l * l) + 1j / (4 * l * mu) * (zt + 1 / zt) * That_xz


def transform_F1(data: TractionData, z, medium: Medium, order: int = DEFAULT_ORDER):
    """Boundary-data function ``F1(zeta)`` by x-quadrature."""
    kap = _realify(fourier_wavenumber_zeta(z, medium.h))
    T = line_transform(data, kap, order)
    out = F1_from_transforms(z, medium, T[1], T[2])
    return out.item() if np.ndim(out) == 0 else out


def transform_F2(data: TractionData, zt, medium: Medium, order: int = DEFAULT_ORDER):
    """Boundary-data function ``F2(zeta_tilde)``; kernel ``exp((l/2)(zt - 1/zt) x)``."""
    kap = _realify(fourier_wavenumber_zeta(zt, medium.l))
    T = line_transform(data, kap, order)
    out = F2_from_transforms(zt, medium, T[0], T[3])
    return out.item() if np.ndim(out) == 0 else out


def transform_Phi(disp: SurfaceDisplacements, xi, medium: Medium, order: int = DEFAULT_ORDER):
    """``(Phi1, Phi2)`` at xi: transforms of ``u(0, x)`` and ``w(0, x)``."""
    kap = _realify(fourier_wavenumber_xi(xi, medium))
    T = line_transform(disp, kap, order)
    if np.ndim(kap) == 0:
        return complex(T[0]), complex(T[1])
    return T[0], T[1]
