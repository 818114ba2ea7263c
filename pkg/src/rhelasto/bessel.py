"""Hankel functions of the first kind for real and complex arguments.

Power series below ``|w| = 12`` and the large-argument Hankel expansion above
it; orders above one come from forward recurrence. The series branch is only
accurate where ``H`` is not exponentially small compared with ``J`` and ``Y``
(``Im w`` moderate), which covers every argument the solver produces: real
distances on the data line and complex distances of modulus above 12 on the
deformed tails. Arguments must avoid the open third quadrant, where the
expansion approaches its Stokes line; distances built with a principal square
root always have a nonnegative real part.
"""
from __future__ import annotations

import math

import numpy as np

SWITCH = 12.0
_EULER = 0.57721566490153286061
_NTERMS = 60


def _series01(w):
    """J0, J1, Y0, Y1 by their power series (principal log)."""
    q = -(w * w) / 4.0
    j0 = np.zeros_like(w)
    j1 = np.zeros_like(w)
    s0 = np.zeros_like(w)
    s1 = np.zeros_like(w)
    t = np.ones_like(w)  # q^m / (m!)^2
    harm = 0.0  # H_m
    for m in range(_NTERMS):
        if m > 0:
            t = t * q / (m * m)
            harm += 1.0 / m
        j0 = j0 + t
        t1 = t / (m + 1)  # q^m / (m! (m+1)!)
        j1 = j1 + t1
        s0 = s0 + harm * t
        # psi(m+1) + psi(m+2) = 2 H_m + 1/(m+1) - 2 gamma
        s1 = s1 + (2 * harm + 1.0 / (m + 1)) * t1
    half = w / 2.0
    j1 = j1 * half
    lg = np.log(half) + _EULER
    y0 = (2 / np.pi) * (lg * j0 - s0)
    y1 = -2 / (np.pi * w) + (2 / np.pi) * lg * j1 - (1 / np.pi) * half * s1
    return j0, j1, y0, y1


def _asym(w, n, terms=30, scaled=False):
    """Hankel expansion of H_n^(1)(w), truncated at its smallest term."""
    mu = 4.0 * n * n
    total = np.ones_like(w)
    term = np.ones_like(w)
    best = np.abs(term)
    done = np.zeros(w.shape, dtype=bool)
    for k in range(1, terms):
        new = term * 1j * (mu - (2 * k - 1) ** 2) / (k * 8.0 * w)
        grow = np.abs(new) > best
        done |= grow
        term = np.where(done, 0, new)
        best = np.where(done, best, np.abs(new))
        total = total + term
    phase = -n * np.pi / 2 - np.pi / 4 if scaled else w - n * np.pi / 2 - np.pi / 4
    return np.sqrt(2.0 / (np.pi * w)) * np.exp(1j * phase) * total


def _integral01(w, nodes=400):
    """``H_nu(w) = (2/(i pi)) e^{-i nu pi/2} int_0^inf e^{i w cosh t} cosh(nu t) dt``.

    Used for ``Im w`` large enough that the series cancels badly.
    """
    T = np.arccosh(1.0 + 45.0 / w.imag.min())
    x, wt = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * T * (x + 1)
    wt = 0.5 * T * wt
    e = np.exp(1j * w[:, None] * np.cosh(t)[None, :])
    h0 = (2 / (1j * np.pi)) * (e * wt).sum(axis=1)
    h1 = (2 / (1j * np.pi)) * (-1j) * (e * (wt * np.cosh(t))).sum(axis=1)
    return h0, h1


def hankel1_01(w, scaled: bool = False):
    """Return ``(H0(w), H1(w))`` of the first kind.

    With ``scaled`` the factor ``exp(i w)`` is removed from both values.
    """
    w = np.asarray(w, dtype=complex)
    shape = w.shape
    w = w.ravel()
    if np.any(w == 0):
        raise ValueError("Hankel functions are singular at zero")
    if np.any((w.real < 0) & (w.imag < 0)):
        raise ValueError("arguments in the open third quadrant are not supported")
    h0 = np.empty_like(w)
    h1 = np.empty_like(w)
    big = np.abs(w) > SWITCH
    if np.any(big):
        h0[big] = _asym(w[big], 0, scaled=scaled)
        h1[big] = _asym(w[big], 1, scaled=scaled)
    upper = ~big & (w.imag > 2.0)
    if np.any(upper):
        h0[upper], h1[upper] = _integral01(w[upper])
    small = ~big & ~upper
    if np.any(small):
        j0, j1, y0, y1 = _series01(w[small])
        h0[small] = j0 + 1j * y0
        h1[small] = j1 + 1j * y1
    if scaled:
        e = np.exp(-1j * w[~big])
        h0[~big] *= e
        h1[~big] *= e
    return h0.reshape(shape), h1.reshape(shape)


def hankel1(n: int, w):
    """``H_n^(1)(w)`` for integer ``n`` (negative orders by reflection)."""
    sign = (-1) ** abs(n) if n < 0 else 1
    n = abs(n)
    h0, h1 = hankel1_01(w)
    if n == 0:
        return h0
    if n == 1:
        return sign * h1
    w = np.asarray(w, dtype=complex)
    prev, cur = h0, h1
    for m in range(1, n):
        prev, cur = cur, (2 * m / w) * cur - prev
    return sign * cur


def hankel1_orders(nmax: int, w, scaled: bool = False):
    """Array ``[H_0, ..., H_nmax]`` stacked along the first axis."""
    h0, h1 = hankel1_01(w, scaled)
    out = [h0, h1]
    w = np.asarray(w, dtype=complex)
    for m in range(1, nmax):
        out.append((2 * m / w) * out[-1] - out[-2])
    return np.stack(out[: nmax + 1])
