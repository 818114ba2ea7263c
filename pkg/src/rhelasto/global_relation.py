"""The 2x2 global-relation system, its determinant and the Rayleigh roots.

On every node of the nonzero part of K the reflected point ``-1/zeta`` lies
on a part where the jump vanishes. The first row of the system is that
vanishing statement; the second row comes from the same argument in the
zeta-tilde plane. Both rows only see the data through the Fourier transforms
of the tractions at the common horizontal wavenumber ``kappa`` (reflection
``zeta -> -1/zeta`` keeps ``kappa``), so the solve is organised by ``kappa``.

The determinant vanishes at the Rayleigh wavenumber ``kappa = +-omega/c``;
those zeros sit on the upper ray and the lower interval of K and K-tilde.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect, brentq

from .boundary_data import (
    DEFAULT_ORDER,
    F1_from_transforms,
    F2_from_transforms,
    TractionData,
    line_transform,
)
from .contours import Variant
from .errors import NearPoleError, SecularEquationError
from .medium import Medium
from .spectral_maps import omega_fn, physical_zeta, vertical_wavenumber, zeta_tilde_from_xi

POLE_TOL = 1e-8


@dataclass(frozen=True)
class Coefficients:
    b: complex
    d: complex
    delta: complex
    beta_c: complex


def _arr(v):
    return v.item() if np.ndim(v) == 0 else v


def coefficients_at(xi, medium: Medium, side: str = "plus") -> Coefficients:
    """b, d, delta and beta at xi (xi-forms)."""
    xi = np.asarray(xi, dtype=complex)
    a, h, l = medium.a, medium.h, medium.l
    r = xi * xi / (a * a)
    p = r + 1 / r
    m = r - 1 / r
    c = h * h / (4 * l * l)
    b = 1j * c * m
    d = (l * l - h * h) / (2 * l * l) + c * p
    delta = -c * (p + 0.5 * (a - 1 / a) ** 2)
    om = np.asarray(omega_fn(xi, a, side))
    beta = 1j * c / (a * a) * (xi / a - a / xi) * om
    return Coefficients(_arr(b), _arr(d), _arr(delta), _arr(beta))


def coefficients_zeta(z, medium: Medium):
    """``(b, d)`` in the zeta variable."""
    z = np.asarray(z, dtype=complex)
    h, l = medium.h, medium.l
    z2 = z * z
    b = 1j * h * h / (4 * l * l) * (z2 - 1 / z2)
    d = (l * l - h * h) / (2 * l * l) + h * h / (4 * l * l) * (z2 + 1 / z2)
    return _arr(b), _arr(d)


def coefficients_zeta_tilde(zt):
    """``(delta, beta)`` in the zeta-tilde variable."""
    zt = np.asarray(zt, dtype=complex)
    z2 = zt * zt
    return _arr(-0.25 * (z2 + 1 / z2)), _arr(0.25j * (z2 - 1 / z2))


def determinant(xi, medium: Medium, side: str = "plus"):
    c = coefficients_at(xi, medium, side)
    return _arr(np.asarray(c.d) * c.delta - np.asarray(c.beta_c) * c.b)


def determinant_D0(xi, medium: Medium, side: str = "plus"):
    """Explicit quartic-plus-radical form of the determinant (up to a constant)."""
    xi = np.asarray(xi, dtype=complex)
    a = medium.a
    r = xi * xi / (a * a)
    first = 0.25 * ((a - 1 / a) ** 2 + 2 * (r + 1 / r)) ** 2
    rad = np.asarray(omega_fn(xi, a, side)) * xi / a
    second = (r - 1 / r) * (1 - a * a / (xi * xi)) * rad / (a * a)
    return _arr(first - second)


def D0_prefactor(medium: Medium, printed: bool = False) -> float:
    """Constant ``c`` with ``D = c * D0``.

    The exact value is ``-(a + 1/a)^(-4)``; ``printed=True`` returns the
    ``-(a + 1/a)^(-1)`` variant, which does not satisfy the identity.
    """
    s = medium.a + 1 / medium.a
    return -(s ** -1) if printed else -(s ** -4)


def secular(c, medium: Medium):
    """Classical Rayleigh function ``(2 - c^2/b^2)^2 - 4 sqrt(1 - c^2/a^2) sqrt(1 - c^2/b^2)``."""
    x = (c / medium.beta_s) ** 2
    y = (c / medium.alpha) ** 2
    return (2 - x) ** 2 - 4 * math.sqrt(1 - y) * math.sqrt(1 - x)


@dataclass(frozen=True)
class RayleighRoots:
    c: float
    c_ratio: float
    xi_c: complex
    xi_c_conj: complex
    kappa: float
    residuals: tuple
    scan_xi: complex | None = None
    k_form: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "c_over_beta_s": self.c_ratio,
            "xi_c": [self.xi_c.real, self.xi_c.imag],
            "xi_c_conj": [self.xi_c_conj.real, self.xi_c_conj.imag],
            "kappa_R": self.kappa,
            "abs_D_at_roots": list(self.residuals),
            "scan_xi_imag": None if self.scan_xi is None else self.scan_xi.imag,
            "k_form": self.k_form,
        }


def xi_from_speed(c: float, medium: Medium) -> complex:
    r = medium.alpha / c
    return 1j * medium.a * (r + math.sqrt(r * r - 1))


def scan_D0_root(medium: Medium, n: int = 4001) -> complex:
    """Locate the zero of D0 on ``xi = i t``, ``a^2 < t < 4 a^2``, by a sign scan."""
    a2 = medium.a**2
    t = np.linspace(a2 * (1 + 1e-9), 4 * a2, n)
    vals = np.real(determinant_D0(1j * t, medium))
    flips = np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]
    if flips.size != 1:
        raise SecularEquationError(f"expected one sign change of D0, found {flips.size}")
    i = flips[0]
    f = lambda s: float(np.real(determinant_D0(1j * s, medium)))
    return 1j * brentq(f, t[i], t[i + 1], xtol=1e-15, rtol=1e-15)


def k_form_report(xi, medium: Medium) -> dict:
    """Compare ``(h^4/16) D0`` with the wavenumber form of the determinant.

    ``k`` is the compressional wavenumber ``(h/2)(zeta + 1/zeta)`` with
    ``zeta = xi/a`` (the vertical wavenumber on the contour, imaginary at the
    Rayleigh root) and the square root is principal. The discrepancy is
    measured against the size of the two terms, since both sides vanish at
    a root.
    """
    h, l = medium.h, medium.l
    z = xi / medium.a
    k = 0.5 * h * (z + 1 / z)
    lhs = h**4 / 16 * complex(determinant_D0(xi, medium))
    s = np.sqrt(complex(k * k + l * l - h * h))
    t1 = (k * k - h * h + l * l / 2) ** 2
    t2 = k * (k * k - h * h) * s
    rhs = t1 - t2
    err = abs(rhs - lhs) / max(abs(t1) + abs(t2), 1e-300)
    return {
        "k": [k.real, k.imag],
        "lhs": [lhs.real, lhs.imag],
        "rhs": [rhs.real, rhs.imag],
        "rel_discrepancy": float(err),
    }


def rayleigh_speed(medium: Medium) -> RayleighRoots:
    """Rayleigh speed by bisection of the classical secular equation."""
    bs = medium.beta_s
    lo = 1e-6 * bs
    if not (secular(lo, medium) < 0 and secular(bs, medium) > 0):
        raise SecularEquationError("secular function has no sign change on (0, beta_s)")
    c = bisect(lambda v: secular(v, medium), lo, bs, xtol=1e-15 * bs, maxiter=200)
    xi = xi_from_speed(c, medium)
    conj = medium.a**2 / xi
    res = (abs(determinant(xi, medium)), abs(determinant(conj, medium)))
    try:
        scan = scan_D0_root(medium)
    except SecularEquationError:
        scan = None
    return RayleighRoots(
        c=c,
        c_ratio=c / bs,
        xi_c=complex(xi),
        xi_c_conj=complex(conj),
        kappa=medium.omega / c,
        residuals=res,
        scan_xi=scan,
        k_form=k_form_report(xi, medium),
    )


def solve_system(xi, variant, F1_val, F2_val, medium: Medium, pole_tol: float = POLE_TOL,
                 side: str = "plus"):
    """Solve the 2x2 system at xi.

    Variant A rows: ``-b P1 + d P2 = F1_val``, ``delta P1 - beta P2 = F2_val``;
    variant B flips the sign of ``b``. ``F1_val`` and ``F2_val`` are the
    right-hand sides already evaluated at the appropriate points.
    """
    v = Variant(variant)
    c = coefficients_at(xi, medium, side)
    sb = -1.0 if v is Variant.A else 1.0
    b = sb * np.asarray(c.b)
    d, de, be = np.asarray(c.d), np.asarray(c.delta), np.asarray(c.beta_c)
    det = -b * be - d * de
    scale = np.maximum(np.abs(d * de), np.abs(be * c.b))
    bad = np.abs(det) <= pole_tol * scale
    if np.any(bad):
        x0 = np.asarray(xi, dtype=complex)[bad] if np.ndim(xi) else xi
        raise NearPoleError(x0, np.abs(det)[bad] if np.ndim(det) else abs(det))
    F1_val = np.asarray(F1_val, dtype=complex)
    F2_val = np.asarray(F2_val, dtype=complex)
    p1 = (-be * F1_val - d * F2_val) / det
    p2 = (b * F2_val - de * F1_val) / det
    return _arr(p1), _arr(p2)


# --- kappa-organised solve used by the pipeline ---

@dataclass
class KappaSolve:
    """Everything the densities need at a set of real wavenumbers."""

    kappa: np.ndarray
    zeta: np.ndarray
    zeta_t: np.ndarray
    xi: np.ndarray
    b: np.ndarray
    d: np.ndarray
    delta: np.ndarray
    beta_c: np.ndarray
    F1r: np.ndarray  # F1(-1/zeta)
    F2r: np.ndarray  # F2(-1/zeta_tilde)
    F1: np.ndarray
    F2: np.ndarray
    D: np.ndarray
    N1: np.ndarray
    N2: np.ndarray

    @property
    def Phi1(self):
        return self.N1 / self.D

    @property
    def Phi2(self):
        return self.N2 / self.D

    @property
    def rho(self):
        return (-self.b * self.N1 - self.d * self.N2) / self.D + self.F1

    @property
    def rho_tilde(self):
        return (-self.delta * self.N1 - self.beta_c * self.N2) / self.D + self.F2


def kappa_solve(kappa, T, medium: Medium) -> KappaSolve:
    """Solve at real wavenumbers given traction transforms ``T`` (4 x n).

    ``T`` rows are the transforms of ``t_xz, t_zz, (t_xz)_x, (t_zz)_x``.
    """
    kappa = np.asarray(kappa, dtype=float)
    zeta = np.asarray(physical_zeta(kappa, medium.h), dtype=complex)
    zt = np.asarray(physical_zeta(kappa, medium.l), dtype=complex)
    b, d = coefficients_zeta(zeta, medium)
    de, be = coefficients_zeta_tilde(zt)
    b, d, de, be = (np.asarray(v, dtype=complex) for v in (b, d, de, be))
    F1 = F1_from_transforms(zeta, medium, T[1], T[2])
    F2 = F2_from_transforms(zt, medium, T[0], T[3])
    F1r = F1_from_transforms(-1 / zeta, medium, T[1], T[2])
    F2r = F2_from_transforms(-1 / zt, medium, T[0], T[3])
    D = d * de - be * b
    N1 = be * F1r + d * F2r
    N2 = de * F1r + b * F2r
    return KappaSolve(kappa, zeta, zt, medium.a * zeta, b, d, de, be, F1r, F2r, F1, F2, D, N1, N2)


def kappa_solve_data(kappa, data: TractionData, medium: Medium, order: int = DEFAULT_ORDER):
    return kappa_solve(kappa, line_transform(data, np.asarray(kappa, dtype=float), order), medium)


def determinant_derivative(xi0: complex, medium: Medium, n: int = 64) -> complex:
    """``dD/dxi`` at an analytic point by a Cauchy integral on a small circle."""
    a = medium.a
    sing = [1j, -1j, 1j * a * a, -1j * a * a, 0.0]
    dist = min(abs(xi0 - s) for s in sing)
    # the cut segments: distance along the imaginary axis
    for lo, hi in ((1, a * a), (-a * a, -1)):
        if abs(xi0.real) < 1e-14 and lo <= xi0.imag <= hi:
            raise ValueError("derivative requested on a branch cut")
    r = 0.3 * dist
    th = 2 * np.pi * np.arange(n) / n
    pts = xi0 + r * np.exp(1j * th)
    vals = np.asarray(determinant(pts, medium), dtype=complex)
    return complex(np.sum(vals * np.exp(-1j * th)) / (n * r))


@dataclass(frozen=True)
class RayleighResidues:
    """Residues of the densities at the four Rayleigh poles.

    ``upper`` refers to the pole at ``kappa = +kappa_R`` (upper ray),
    ``lower`` to ``kappa = -kappa_R`` (lower interval). Residues are of
    ``rho/zeta`` in zeta and ``rho_tilde/zeta_tilde`` in zeta-tilde.
    """

    res_upper: complex
    res_lower: complex
    res_t_upper: complex
    res_t_lower: complex
    zeta_upper: complex
    zeta_lower: complex
    zt_upper: complex
    zt_lower: complex
    q_p: complex
    q_s: complex

    def amplitudes(self, medium: Medium):
        """``(C1, C2, C1t, C2t)``: half-residue (outgoing) addition-term amplitudes."""
        h2, l2 = medium.h**2, medium.l**2
        return (
            -0.25j * h2 * self.res_upper,
            0.25j * h2 * self.res_lower,
            -0.25j * l2 * self.res_t_upper,
            0.25j * l2 * self.res_t_lower,
        )


def rayleigh_residues(ks: KappaSolve, medium: Medium) -> RayleighResidues:
    """Residues from a :class:`KappaSolve` evaluated at ``kappa = [+kR, -kR]``."""
    out = []
    for j in range(2):
        z, zt, xi = ks.zeta[j], ks.zeta_t[j], ks.xi[j]
        dD = determinant_derivative(complex(xi), medium)
        num = -ks.b[j] * ks.N1[j] - ks.d[j] * ks.N2[j]
        num_t = -ks.delta[j] * ks.N1[j] - ks.beta_c[j] * ks.N2[j]
        a = medium.a
        dxi_dzt = medium.l * (1 + 1 / zt**2) / (medium.h / a * (1 + a * a / xi**2))
        out.append((num / (a * dD) / z, num_t / (dD * dxi_dzt) / zt, z, zt))
    q_p = 0.5 * medium.h * (ks.zeta[0] + 1 / ks.zeta[0])
    q_s = 0.5 * medium.l * (ks.zeta_t[0] + 1 / ks.zeta_t[0])
    return RayleighResidues(
        out[0][0], out[1][0], out[0][1], out[1][1], out[0][2], out[1][2], out[0][3], out[1][3],
        complex(q_p), complex(q_s),
    )


def solvability_residual(data: TractionData, roots: RayleighRoots, medium: Medium,
                         order: int = DEFAULT_ORDER):
    """``delta F1(-a^2/xi) + b F2(-a^2/xi)`` at ``xi_c`` and ``a^2/xi_c``.

    Both roots are handled on the physical side: the reflected arguments are
    evaluated through the wavenumber ``+-kappa_R`` they share with the root.
    """
    ks = kappa_solve_data(np.array([roots.kappa, -roots.kappa]), data, medium, order)
    vals = ks.delta * ks.F1r + ks.b * ks.F2r
    return complex(vals[0]), complex(vals[1])


def rayleigh_mode_vector(roots: RayleighRoots, medium: Medium):
    """Null vector ``(d, b)`` of the variant-A matrix at ``xi_c`` (up to scale)."""
    c = coefficients_at(roots.xi_c, medium)
    v = np.array([c.d, c.b], dtype=complex)
    return v / np.linalg.norm(v)


def rayleigh_mode_amplitudes(medium: Medium, direction: int = +1, amplitude: complex = 1.0):
    """Addition-term amplitudes ``(C1, C2, C1t, C2t)`` of one pure Rayleigh wave.

    At the root the map ``(N1, N2) -> (Res rho, Res rho~)`` has rank one, so
    the S/P amplitude ratio follows from the null vector alone, whatever the
    data. ``direction = +1`` is the wave at ``kappa = +kappa_R`` (C1, C1t),
    ``-1`` the one at ``-kappa_R`` (C2, C2t). The P amplitude is scaled to
    ``amplitude``.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    roots = rayleigh_speed(medium)
    kap = np.array([roots.kappa * direction])
    ks = kappa_solve(kap, np.zeros((4, 1), dtype=complex), medium)
    j = 0
    # any N outside the common left kernel works; use the conjugate of the first row
    N1, N2 = np.conj(ks.b[j]), np.conj(ks.d[j])
    num = -ks.b[j] * N1 - ks.d[j] * N2
    num_t = -ks.delta[j] * N1 - ks.beta_c[j] * N2
    if abs(num) < abs(num_t) * 1e-12:
        N1, N2 = np.conj(ks.delta[j]), np.conj(ks.beta_c[j])
        num = -ks.b[j] * N1 - ks.d[j] * N2
        num_t = -ks.delta[j] * N1 - ks.beta_c[j] * N2
    a = medium.a
    z, zt, xi = ks.zeta[j], ks.zeta_t[j], ks.xi[j]
    dxi_dzt = medium.l * (1 + 1 / zt**2) / (medium.h / a * (1 + a * a / xi**2))
    # the common factor 1/D'(xi) and the residue signs cancel in the ratio
    rp = medium.h**2 * num / (a * z)
    rs = medium.l**2 * num_t / (dxi_dzt * zt)
    C, Ct = complex(amplitude), complex(amplitude) * complex(rs / rp)
    return (C, 0j, Ct, 0j) if direction == 1 else (0j, C, 0j, Ct)


# --- densities on the contours ---

@dataclass(frozen=True)
class Settings:
    """Numerical knobs shared by the spectral solve and the field evaluation.

    order : Gauss-Legendre nodes per panel on the spectral contours
    truncation : ray cutoff ``t_max`` (None picks it from the data decay)
    z_min : smallest evaluation height; None means ``1e-3 / h``
    pole_tol : relative determinant threshold of :func:`solve_system`
    x_order : nodes per panel of the x-quadrature
    """

    order: int = 20
    truncation: float | None = None
    z_min: float | None = None
    pole_tol: float = POLE_TOL
    x_order: int = DEFAULT_ORDER

    def zmin(self, medium: Medium) -> float:
        return self.z_min if self.z_min is not None else 1e-3 / medium.h


@dataclass
class ContourDensity:
    """Samples of one density on the nonzero part of one contour."""

    plane: str
    wavenumber: float
    nodes: np.ndarray
    weights: np.ndarray
    kappa: np.ndarray
    q: np.ndarray
    rho: np.ndarray
    segment: np.ndarray

    def integrand_weights(self) -> np.ndarray:
        """``(k^2/4 pi) w_j rho_j / node_j``: coefficient of ``exp(i q z - i kappa x)``."""
        k = self.wavenumber
        return k * k / (4 * np.pi) * self.weights * self.rho / self.nodes


@dataclass
class SpectralDensity:
    medium: Medium
    rho: ContourDensity
    rho_tilde: ContourDensity
    roots: RayleighRoots | None
    residues: RayleighResidues | None
    amplitudes: tuple
    solvability: tuple
    settings: Settings
    kappa_max: float
    zero_part_max: float = 0.0
    info: dict = field(default_factory=dict)

    def scale(self) -> float:
        return float(max(np.abs(self.rho.rho).max(initial=0), np.abs(self.rho_tilde.rho).max(initial=0)))


def data_kappa_max(data: TractionData, medium: Medium, z_min: float) -> float:
    """Wavenumber beyond which data and height decay leave < 1e-16 of the integrand."""
    kinds = data.parts if data.parts else (data,)
    best = 0.0
    for p in kinds:
        d = p.decay
        if d.kind == "zero":
            continue
        if d.kind == "gaussian":
            km = 2 * math.sqrt(38.0) / d.width
        elif d.kind == "outgoing":
            km = 38.0 / d.depth + d.k
        else:  # compact: algebraic decay, rely on height and sampling resolution
            km = min(38.0 / z_min, 8 * math.pi / max(d.width, 1e-12))
        best = max(best, km)
    zcap = math.hypot(medium.l, 38.0 / z_min)
    return max(min(best, zcap), 2.0 * medium.l)


def data_extent(data: TractionData) -> float:
    kinds = data.parts if data.parts else (data,)
    ext = 0.0
    for p in kinds:
        d = p.decay
        if d.kind == "gaussian":
            ext = max(ext, abs(d.center) + 3 * d.width)
        elif d.kind == "outgoing":
            ext = max(ext, abs(d.x0) + d.depth)
        elif d.kind == "compact":
            ext = max(ext, abs(d.lo), abs(d.hi))
    return ext


def _segments(medium: Medium, plane: str, truncation: float, pole_kappa: float | None):
    from dataclasses import replace

    from .contours import build_contour_zeta, build_contour_zeta_tilde

    if plane == "zeta":
        cs, k = build_contour_zeta(medium, truncation), medium.h
    else:
        cs, k = build_contour_zeta_tilde(medium, truncation), medium.l
    segs = []
    for s in cs.nonzero:
        if s.kind != "arc" and pole_kappa is not None:
            s = replace(s, pole=math.acosh(pole_kappa / k))
        segs.append(s)
    return segs, k


def _contour_density(plane, medium, data, settings, truncation, dkappa, roots):
    from .contours import quadrature_for
    from .spectral_maps import kappa_of

    segs, k = _segments(medium, plane, truncation, None if roots is None else roots.kappa)
    nodes, weights, seg_ids = [], [], []
    for s in segs:
        q = quadrature_for(s, settings.order, truncation, dkappa_max=dkappa)
        nodes.append(q.nodes)
        weights.append(q.weights)
        seg_ids.append(np.full(q.nodes.size, s.name, dtype=object))
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    kap = np.real(kappa_of(nodes, k))
    qv = 0.5 * k * (nodes + 1 / nodes)
    return nodes, weights, kap, qv, np.concatenate(seg_ids), k


def solve_density(data: TractionData, medium: Medium, settings: Settings = Settings(),
                  x_extent: float = 0.0, z_min: float | None = None) -> SpectralDensity:
    """Sample both densities on their contours for evaluation at ``|x| <= x_extent``.

    Rayleigh poles are integrated as principal values (symmetric panels) and
    their half-residues are returned as addition-term amplitudes, which is
    the outgoing (limiting-absorption) choice.
    """
    zmin = z_min if z_min is not None else settings.zmin(medium)
    roots = rayleigh_speed(medium)
    kmax = data_kappa_max(data, medium, zmin)
    R = x_extent + data_extent(data) + 1.0 / medium.h
    dkappa = min(0.8 * settings.order / R, 2.0 * medium.h)
    out = {}
    for plane in ("zeta", "zeta_tilde"):
        k = medium.h if plane == "zeta" else medium.l
        if settings.truncation is not None:
            T = settings.truncation
        else:
            u = math.acosh(max(kmax / k, 1.0 + 1e-9))
            T = math.exp(u)
        out[plane] = _contour_density(plane, medium, data, settings, T, dkappa, roots)
    kap_all = np.concatenate([out["zeta"][2], out["zeta_tilde"][2], [roots.kappa, -roots.kappa]])
    T_all = line_transform(data, kap_all, settings.x_order)
    nz = out["zeta"][0].size
    nt = out["zeta_tilde"][0].size
    ks_z = kappa_solve(kap_all[:nz], T_all[:, :nz], medium)
    ks_t = kappa_solve(kap_all[nz : nz + nt], T_all[:, nz : nz + nt], medium)
    ks_r = kappa_solve(kap_all[nz + nt :], T_all[:, nz + nt :], medium)
    for ks in (ks_z, ks_t):
        scale = np.maximum(np.abs(ks.d * ks.delta), np.abs(ks.beta_c * ks.b))
        bad = np.abs(ks.D) <= settings.pole_tol * scale
        if np.any(bad):
            raise NearPoleError(ks.xi[bad], np.abs(ks.D[bad]))
    dens = []
    for plane, ks, rho in (("zeta", ks_z, ks_z.rho), ("zeta_tilde", ks_t, ks_t.rho_tilde)):
        nodes, weights, kap, qv, segid, k = out[plane]
        dens.append(ContourDensity(plane, k, nodes, weights, kap, qv, rho, segid))
    residues = rayleigh_residues(ks_r, medium)
    amps = residues.amplitudes(medium)
    solv = tuple(complex(v) for v in (ks_r.delta * ks_r.F1r + ks_r.b * ks_r.F2r))
    # global relation on the zero parts: rho at -1/zeta for every node
    zr = -1 / ks_z.zeta
    bz, dz = coefficients_zeta(zr, medium)
    F1z = F1_from_transforms(zr, medium, T_all[1, :nz], T_all[2, :nz])
    rz = -bz * ks_z.Phi1 - dz * ks_z.Phi2 + F1z
    zero_max = float(np.abs(rz).max()) if rz.size else 0.0
    return SpectralDensity(
        medium=medium,
        rho=dens[0],
        rho_tilde=dens[1],
        roots=roots,
        residues=residues,
        amplitudes=amps,
        solvability=solv,
        settings=settings,
        kappa_max=kmax,
        zero_part_max=zero_max,
        info={"dkappa": dkappa, "nodes_zeta": int(nz), "nodes_zeta_tilde": int(nt)},
    )


def density_rho12(data: TractionData, nodes, medium: Medium, order: int = DEFAULT_ORDER):
    """``rho(zeta) = -b Phi1 - d Phi2 + F1(zeta)`` at zeta points with real kappa.

    Phi is taken from the solve at the same wavenumber, so nodes on the parts
    where the density vanishes return the global-relation residual.
    """
    from .spectral_maps import kappa_of

    nodes = np.asarray(nodes, dtype=complex)
    kap = np.real(kappa_of(nodes, medium.h))
    ks = kappa_solve_data(kap, data, medium, order)
    b, d = coefficients_zeta(nodes, medium)
    T = line_transform(data, kap, order)
    return -np.asarray(b) * ks.Phi1 - np.asarray(d) * ks.Phi2 + F1_from_transforms(nodes, medium, T[1], T[2])


def density_rho12_tilde(data: TractionData, nodes, medium: Medium, order: int = DEFAULT_ORDER):
    """``rho~(zt) = -delta Phi1 - beta Phi2 + F2(zt)`` at zeta-tilde points."""
    from .spectral_maps import kappa_of

    nodes = np.asarray(nodes, dtype=complex)
    kap = np.real(kappa_of(nodes, medium.l))
    ks = kappa_solve_data(kap, data, medium, order)
    de, be = coefficients_zeta_tilde(nodes)
    T = line_transform(data, kap, order)
    return -np.asarray(de) * ks.Phi1 - np.asarray(be) * ks.Phi2 + F2_from_transforms(nodes, medium, T[0], T[3])
