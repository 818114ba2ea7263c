"""Integration contours in the zeta, zeta-tilde and xi planes.

The nonzero part of K (wavenumber ``k``; ``k = h`` for zeta, ``k = l`` for
zeta-tilde) is traversed in the direction of increasing field wavenumber
``-kappa``::

    i*inf  ->  i  ->  (right unit semicircle through 1)  ->  -i  ->  0

Rays and intervals on the imaginary axis are parametrized by ``u >= 0`` with
``t = exp(u)`` (ray) or ``t = exp(-u)`` (interval), so that
``|kappa| = k cosh(u)`` on both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import ClassificationError, ParameterError, RefinementNeeded
from .medium import Medium
from .spectral_maps import AXIS_TOL, Plane


class Variant(str, Enum):
    A = "A"
    B = "B"
    NONE = "none"


@dataclass(frozen=True)
class Segment:
    """One piece of a contour.

    ``point(p)`` maps the real parameter to the complex plane and
    ``dpoint(p)`` is its derivative; ``orientation`` is +1 when the contour
    runs with increasing parameter. ``branch_points`` are parameter values
    where the integrand has a square-root endpoint behaviour, ``pole`` the
    parameter of a simple pole handled as a principal value.
    """

    name: str
    plane: Plane
    kind: str  # ray | interval | arc
    lo: float
    hi: float
    point: Callable = field(repr=False, compare=False)
    dpoint: Callable = field(repr=False, compare=False)
    orientation: int = 1
    wavenumber: float = 1.0
    side: str = "none"
    variant: Variant = Variant.NONE
    branch_points: tuple = ()
    pole: float | None = None
    axis_sign: int = 0
    expo: int = 0

    def contains(self, z, tol: float = 1e-10) -> bool:
        return self.parameter_of(z, tol) is not None

    def parameter_of(self, z, tol: float = 1e-10):
        z = complex(z)
        scale = max(abs(z), 1.0)
        if self.kind == "arc":
            r0 = abs(self.point(self.lo))
            if abs(abs(z) - r0) > tol * scale:
                return None
            th = math.atan2(z.imag, z.real)
            for cand in (th, th + 2 * math.pi, th - 2 * math.pi):
                if self.lo - 1e-12 <= cand <= self.hi + 1e-12:
                    return cand
            return None
        if abs(z.real) > tol * scale or z.imag == 0 or np.sign(z.imag) != self.axis_sign:
            return None
        p = self.expo * math.log(abs(z.imag))
        if self.lo - 1e-12 <= p <= self.hi + 1e-12:
            return p
        return None


def _ray(name, plane, k, sign, up, U, orientation):
    """Imaginary-axis piece ``sign * i * exp(+-u)``; ``up`` selects exp(+u)."""
    e = 1.0 if up else -1.0
    return Segment(
        name=name,
        plane=plane,
        kind="ray" if up else "interval",
        lo=0.0,
        hi=U,
        point=lambda u, s=sign, e=e: s * 1j * np.exp(e * np.asarray(u, dtype=float)),
        dpoint=lambda u, s=sign, e=e: e * s * 1j * np.exp(e * np.asarray(u, dtype=float)),
        orientation=orientation,
        wavenumber=k,
        axis_sign=sign,
        expo=int(e),
    )


def _arc(name, plane, k, lo, hi, orientation):
    return Segment(
        name=name,
        plane=plane,
        kind="arc",
        lo=lo,
        hi=hi,
        point=lambda th: np.exp(1j * np.asarray(th, dtype=float)),
        dpoint=lambda th: 1j * np.exp(1j * np.asarray(th, dtype=float)),
        orientation=orientation,
        wavenumber=k,
    )


@dataclass(frozen=True)
class ContourSet:
    nonzero: tuple
    zero: tuple


def _build(plane, k, truncation):
    if truncation <= 1.0:
        raise ParameterError("ray truncation must exceed 1")
    U = math.log(truncation)
    nonzero = (
        _ray("ray_upper", plane, k, +1, True, U, -1),
        _arc("arc_right", plane, k, -math.pi / 2, math.pi / 2, -1),
        _ray("interval_lower", plane, k, -1, False, U, +1),
    )
    zero = (
        _ray("ray_lower", plane, k, -1, True, U, +1),
        _ray("interval_upper", plane, k, +1, False, U, -1),
        _arc("arc_left", plane, k, math.pi / 2, 3 * math.pi / 2, +1),
    )
    return ContourSet(nonzero, zero)


def build_contour_zeta(medium: Medium, truncation: float = 1e3) -> ContourSet:
    """Nonzero parts of K plus the parts where the jump vanishes.

    The ray and interval carry a square-root break where the shear radical
    vanishes (``|kappa| = l``, i.e. ``t = a`` and ``t = 1/a``).
    """
    cs = _build(Plane.ZETA, medium.h, truncation)
    ua = math.log(medium.a)
    nz = tuple(
        replace(s, branch_points=(ua,)) if s.kind != "arc" else s for s in cs.nonzero
    )
    return ContourSet(nz, cs.zero)


def build_contour_zeta_tilde(medium: Medium, truncation: float = 1e3) -> ContourSet:
    """Nonzero parts of K-tilde; breaks at ``|kappa| = h`` on the arc."""
    cs = _build(Plane.ZETA_TILDE, medium.l, truncation)
    th = math.asin(medium.h / medium.l)
    nz = tuple(replace(s, branch_points=(-th, th)) if s.kind == "arc" else s for s in cs.nonzero)
    return ContourSet(nz, cs.zero)


# --- xi-plane segment lists ---

@dataclass(frozen=True)
class XiSegment:
    name: str
    kind: str  # axis | arc
    lo: float  # Im(xi) range for axis pieces, angle range for the arc
    hi: float
    variant: Variant
    side: str
    closed_lo: bool = True
    closed_hi: bool = True

    def contains(self, xi, radius: float, tol: float = 1e-10) -> bool:
        xi = complex(xi)
        scale = max(abs(xi), 1.0)
        if self.kind == "arc":
            if abs(abs(xi) - radius) > tol * scale or xi.real < -tol * scale:
                return False
            th = math.atan2(xi.imag, xi.real)
            return self._inrange(th, tol)
        if abs(xi.real) > AXIS_TOL * scale and abs(xi.real) > tol * scale:
            return False
        return self._inrange(xi.imag, tol * scale)

    def _inrange(self, v, tol):
        lo_ok = v > self.lo - tol if self.closed_lo else v > self.lo + tol
        hi_ok = v < self.hi + tol if self.closed_hi else v < self.hi - tol
        return lo_ok and hi_ok


def build_segments_xi(medium: Medium) -> list[XiSegment]:
    """Solve-contour pieces with their algebraic-system variant.

    Variant A: [ia^2, i inf), [ia, ia^2]+, [-ia, -i]+, [-i, 0), C_r.
    Variant B: [i, ia]+, [-ia, -ia^2]+.
    ``ia`` itself belongs to C_r (A); the interval endpoints shared between A
    and B pieces are assigned to the A pieces.
    """
    a = medium.a
    a2 = a * a
    A, B = Variant.A, Variant.B
    return [
        XiSegment("ray_upper_far", "axis", a2, math.inf, A, "none"),
        XiSegment("cut_upper_outer", "axis", a, a2, A, "plus", closed_hi=False),
        XiSegment("cut_lower_inner", "axis", -a, -1.0, A, "plus", closed_lo=False, closed_hi=False),
        XiSegment("interval_lower", "axis", -1.0, 0.0, A, "none", closed_hi=False),
        XiSegment("arc_right", "arc", -math.pi / 2, math.pi / 2, A, "none"),
        XiSegment("cut_upper_inner", "axis", 1.0, a, B, "plus", closed_lo=False, closed_hi=False),
        XiSegment("cut_lower_outer", "axis", -a2, -a, B, "plus", closed_hi=True, closed_lo=False),
    ]


def classify_xi(xi, medium: Medium, tol: float = 1e-10) -> Variant:
    """Variant (A or B) of the segment containing ``xi``."""
    for seg in build_segments_xi(medium):
        if seg.contains(xi, medium.a, tol):
            return seg.variant
    raise ClassificationError(f"xi = {complex(xi)!r} is not on the solve contour")


# --- quadrature ---

@dataclass(frozen=True)
class Quadrature:
    """Nodes and complex weights (including the d(zeta) factor and orientation)."""

    nodes: np.ndarray
    weights: np.ndarray
    params: np.ndarray
    segment: str
    truncation: float
    order: int
    pole_panel: tuple | None = None

    def integrate(self, values) -> complex:
        return complex(np.sum(self.weights * values))


def _gl(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel(p, q, n, grade=None):
    """GL nodes on [p, q]; ``grade`` clusters quadratically at one end."""
    x, w = _gl(n)
    s = 0.5 * (x + 1)  # [0, 1]
    ws = 0.5 * w
    L = q - p
    if grade is None:
        return p + L * s, L * ws
    if grade == "lo":
        return p + L * s * s, 2 * L * s * ws
    if grade == "hi":
        return q - L * s * s, 2 * L * s * ws
    if grade == "both":
        # sin-map pushes nodes to both ends with square-root resolution
        t = 0.5 * (1 - np.cos(np.pi * s))
        return p + L * t, L * 0.5 * np.pi * np.sin(np.pi * s) * ws
    raise ValueError(grade)


def _fill(lo, hi, step_fn):
    """Breakpoints between lo and hi with local step from ``step_fn(p)``."""
    pts = [lo]
    p = lo
    while hi - p > 1e-14:
        s = step_fn(p)
        for _ in range(4):
            s = min(s, step_fn(min(p + s, hi)))
        if p + s >= hi - 0.25 * s:
            s = hi - p
        p = p + s
        pts.append(p)
    pts[-1] = hi
    return pts


def quadrature_for(
    segment: Segment,
    order: int,
    truncation: float | None = None,
    z_hint: float | None = None,
    dkappa_max: float | None = None,
    du_max: float = 0.5,
) -> Quadrature:
    """Composite Gauss-Legendre rule along a segment.

    Panels are sized so the horizontal wavenumber changes by at most
    ``dkappa_max`` per panel. Square-root breaks get quadratically graded
    neighbours; a pole gets a symmetric panel (principal value) surrounded by
    geometrically growing panels.

    ``z_hint`` requests a check that the vertical decay factor at the ray
    cutoff is below 1e-16 for a field point at that height.
    """
    if order < 2:
        raise ParameterError("quadrature order must be at least 2")
    k = segment.wavenumber
    if dkappa_max is None:
        dkappa_max = 0.5 * k
    lo, hi = segment.lo, segment.hi
    if segment.kind != "arc" and truncation is not None:
        U = math.log(truncation)
        if U <= 0:
            raise ParameterError("ray truncation must exceed 1")
        hi = min(hi, U) if segment.hi < math.inf else U
    if segment.kind != "arc" and z_hint is not None:
        T = math.exp(hi)
        decay = math.exp(-0.5 * k * (T - 1 / T) * z_hint) if z_hint > 0 else 1.0
        if decay > 1e-16:
            need = 0.0 if z_hint <= 0 else 2 * 36.85 / (k * z_hint)
            raise RefinementNeeded(
                f"ray truncation t={T:.4g} leaves decay factor {decay:.2e} at z={z_hint}; "
                + (f"need t >= {need:.4g}" if z_hint > 0 else "z must be positive")
            )

    if segment.kind == "arc":
        step = lambda p: min(math.pi / 8, dkappa_max / k)
    else:
        step = lambda p: min(du_max, dkappa_max / (k * max(math.sinh(p), 1e-300)))

    hard = {lo, hi}
    graded_at = set()
    for bp in segment.branch_points:
        if lo < bp < hi:
            hard.add(bp)
            graded_at.add(bp)
    pole_panel = None
    if segment.pole is not None and lo < segment.pole < hi:
        uc = segment.pole
        gap = min([abs(uc - b) for b in hard] + [step(uc)])
        delta = 0.5 * gap
        pole_panel = (uc - delta, uc + delta)
        hard.update(pole_panel)
    hard = sorted(hard)

    def ring_step(p):
        s = step(p)
        if pole_panel is not None:
            d = min(abs(p - pole_panel[0]), abs(p - pole_panel[1]))
            s = min(s, max(2 * (pole_panel[1] - pole_panel[0]), d))
        return s

    nodes, weights = [], []
    for p0, p1 in zip(hard[:-1], hard[1:]):
        if pole_panel is not None and (p0, p1) == pole_panel:
            n = order + (order % 2)
            x, w = _panel(p0, p1, n)
            nodes.append(x)
            weights.append(w)
            continue
        # march away from the pole so geometric growth starts at it
        if pole_panel is not None and p1 == pole_panel[0]:
            rev = _fill(-p1, -p0, lambda q: ring_step(-q))
            brk = sorted(-np.array(rev))
        else:
            brk = _fill(p0, p1, ring_step)
        for j, (q0, q1) in enumerate(zip(brk[:-1], brk[1:])):
            g_lo = q0 in graded_at
            g_hi = q1 in graded_at
            grade = "both" if g_lo and g_hi else "lo" if g_lo else "hi" if g_hi else None
            x, w = _panel(q0, q1, order, grade)
            nodes.append(x)
            weights.append(w)
    params = np.concatenate(nodes)
    pw = np.concatenate(weights)
    pts = segment.point(params)
    wts = segment.orientation * segment.dpoint(params) * pw
    return Quadrature(
        nodes=np.asarray(pts, dtype=complex),
        weights=np.asarray(wts, dtype=complex),
        params=params,
        segment=segment.name,
        truncation=math.exp(hi) if segment.kind != "arc" else math.nan,
        order=order,
        pole_panel=pole_panel,
    )
