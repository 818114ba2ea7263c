"""Independent oracles: manufactured fields, PDE residuals and far-field fits."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundary_data import SurfaceDisplacements, TractionData, wavesum_line_data
from .cylwave import CylField, WaveSum
from .errors import ConvergenceError, ParameterError
from .medium import Medium


@dataclass(frozen=True)
class ManufacturedSolution:
    """Closed-form potentials, displacements and stresses of a buried source."""

    kind: str
    medium: Medium
    source_x: float
    source_depth: float
    tau1: WaveSum
    tau2: WaveSum
    u: WaveSum
    w: WaveSum
    t_xz: WaveSum
    t_zz: WaveSum

    def fields(self, x, z) -> dict:
        return {
            name: getattr(self, name)(x, z)
            for name in ("tau1", "tau2", "u", "w", "t_xz", "t_zz")
        }

    def surface_displacements(self) -> SurfaceDisplacements:
        return wavesum_line_data(SurfaceDisplacements, [self.u, self.w], 0.0, "manufactured_disp")


def make_manufactured(
    kind: str,
    medium: Medium,
    source_x: float = 0.25,
    source_depth: float = -1.0,
    amplitude: complex = 1.0,
):
    """Outgoing cylindrical-wave solution and the tractions that drive it.

    ``hankel_p`` puts ``H0(h r)`` in the first potential, ``hankel_s`` puts
    ``H0(l r)`` in the second, ``mixed`` uses both (the shear one with
    amplitude ``0.5j * amplitude``). The returned traction data are the
    negated surface stresses, matching the sign convention of the boundary
    conditions.
    """
    if not source_depth < 0:
        raise ParameterError("the source must lie outside the half-plane (depth < 0)")
    h, l = medium.h, medium.l
    t1 = WaveSum()
    t2 = WaveSum()
    if kind in ("hankel_p", "mixed"):
        t1 = WaveSum((CylField(h, source_x, source_depth, {0: complex(amplitude)}),))
    if kind in ("hankel_s", "mixed"):
        amp2 = complex(amplitude) * (0.5j if kind == "mixed" else 1.0)
        t2 = WaveSum((CylField(l, source_x, source_depth, {0: amp2}),))
    if kind not in ("hankel_p", "hankel_s", "mixed"):
        raise ParameterError(f"unknown manufactured kind {kind!r}")
    u = t1.dx().scale(-2 / h**2) + t2.dz().scale(2 / l**2)
    w = t1.dz().scale(-2 / h**2) + t2.dx().scale(-2 / l**2)
    lam, mu = medium.lam, medium.mu
    txz = (u.dz() + w.dx()).scale(mu)
    tzz = u.dx().scale(lam) + w.dz().scale(lam + 2 * mu)
    sol = ManufacturedSolution(kind, medium, source_x, source_depth, t1, t2, u, w, txz, tzz)
    sums = [txz.scale(-1), tzz.scale(-1), txz.dx().scale(-1), tzz.dx().scale(-1)]
    data = wavesum_line_data(TractionData, sums, 0.0, f"manufactured_{kind}")
    return data, sol


def weyl_transform(field: WaveSum, z: float, kappa):
    """Exact ``int exp(i kappa x) f(x, z) dx`` of a harmonic sum above its sources.

    Uses ``int e^{i kappa x} H0(k r) dx = 2 e^{i kappa x0} e^{i q (z - z0)} / q``
    with the outgoing ``q = sqrt(k^2 - kappa^2)``; x-derivatives become
    ``-i kappa`` and z-derivatives ``i q`` applied to the harmonic coefficients
    through ``D+-``. Only orders up to a few are needed here, so the
    coefficient of ``H_n e^{i n phi}`` is converted by repeated ``D+`` /
    ``D-`` inversion: ``H_n e^{i n phi} = (-D+/k)^n H_0`` for ``n >= 0`` and
    ``(D-/k)^{|n|} H_0`` for ``n < 0``.
    """
    kappa = np.asarray(kappa, dtype=float)
    out = np.zeros(kappa.shape, dtype=complex)
    for t in field.terms:
        k = t.k
        q = np.sqrt(complex(1) * (k * k - kappa * kappa))
        q = np.where(q.imag < 0, -q, q)
        base = 2 * np.exp(1j * kappa * t.x0) * np.exp(1j * q * (z - t.z0)) / q
        dxs = -1j * kappa
        dzs = 1j * q
        dp = dxs + 1j * dzs
        dm = dxs - 1j * dzs
        for n, c in t.coeffs.items():
            fac = (-dp / k) ** n if n >= 0 else (dm / k) ** (-n)
            out = out + c * fac * base
    return out


# --- finite-difference residuals ---

_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def _check_step(step, k):
    wavelength = 2 * math.pi / k
    if not step > 0:
        raise ParameterError("step must be positive")
    if step > wavelength / 20 * (1 + 1e-12):
        raise ParameterError(
            f"grid too coarse: step {step:g} exceeds wavelength/20 = {wavelength / 20:g}"
        )


def _d2(f, axis, step):
    """Fourth-order second derivative on interior nodes (two-node margin on both axes)."""
    f = np.asarray(f)
    n0, n1 = f.shape
    out = 0
    for j, c in enumerate(_D2):
        if axis == 0:
            out = out + c * f[j : n0 - 4 + j, 2 : n1 - 2]
        else:
            out = out + c * f[2 : n0 - 2, j : n1 - 4 + j]
    return out / step**2


def _dxz(f, step):
    """Fourth-order mixed derivative on interior nodes."""
    f = np.asarray(f)
    n0, n1 = f.shape
    out = 0
    for i, ci in enumerate(_D1):
        for j, cj in enumerate(_D1):
            if ci and cj:
                out = out + ci * cj * f[i : n0 - 4 + i, j : n1 - 4 + j]
    return out / step**2


def _interior(f):
    return np.asarray(f)[2:-2, 2:-2]


def helmholtz_residual(values, k: float, step: float) -> float:
    """``max |Lap_h tau + k^2 tau| / (k^2 max|tau|)`` over interior nodes.

    ``values`` has shape ``(nz, nx)`` on a uniform grid of spacing ``step``
    in both directions. Zero fields give 0.
    """
    _check_step(step, k)
    v = np.asarray(values, dtype=complex)
    if v.ndim != 2 or min(v.shape) < 5:
        raise ParameterError("need a 2-D grid with at least 5 nodes per direction")
    scale = np.abs(v).max()
    if scale == 0:
        return 0.0
    r = _d2(v, 0, step) + _d2(v, 1, step) + k * k * _interior(v)
    return float(np.abs(r).max() / (k * k * scale))


def elastodynamic_residual(u, w, medium: Medium, step: float):
    """Residuals of the two displacement equations, relative to ``l^2 max(|u|, |w|)``.

    The equations, divided by ``lambda + 2 mu``, read::

        u_xx + (h^2/l^2) u_zz + (1 - h^2/l^2) w_xz + h^2 u = 0
        (h^2/l^2) w_xx + w_zz + (1 - h^2/l^2) u_xz + h^2 w = 0

    Grids are indexed ``[z, x]``. The step is checked against the shear
    wavelength, the shorter one.
    """
    h, l = medium.h, medium.l
    _check_step(step, l)
    u = np.asarray(u, dtype=complex)
    w = np.asarray(w, dtype=complex)
    scale = max(np.abs(u).max(), np.abs(w).max())
    if scale == 0:
        return 0.0, 0.0
    g = h * h / (l * l)
    ru = _d2(u, 1, step) + g * _d2(u, 0, step) + (1 - g) * _dxz(w, step) + h * h * _interior(u)
    rw = g * _d2(w, 1, step) + _d2(w, 0, step) + (1 - g) * _dxz(u, step) + h * h * _interior(w)
    norm = l * l * scale
    return float(np.abs(ru).max() / norm), float(np.abs(rw).max() / norm)


def fd_patch(x_center: float, z_center: float, step: float, n: int = 21):
    """Square ``n x n`` grid of spacing ``step``; returns ``(x_nodes, z_nodes, X, Z)``."""
    off = (np.arange(n) - (n - 1) / 2) * step
    x = x_center + off
    z = z_center + off
    X, Z = np.meshgrid(x, z)
    return x, z, X, Z


def boundary_residual(density, data: TractionData, x, threads: int = 1) -> float:
    """``max |T(x, 0) + T0(x)| / max |T0|`` over both traction components.

    Surface values are Richardson-extrapolated (see
    :func:`rhelasto.reconstruction.boundary_values`). With zero data the
    absolute residual is returned.
    """
    from .reconstruction import boundary_values

    x = np.atleast_1d(np.asarray(x, dtype=float))
    bv = boundary_values(density, x, ("t_xz", "t_zz"), threads)
    T0 = data(x)
    res = max(np.abs(bv["t_xz"] + T0[0]).max(), np.abs(bv["t_zz"] + T0[1]).max())
    scale = np.abs(T0[:2]).max()
    return float(res / scale) if scale > 0 else float(res)


def scaled_density(density, factor: complex):
    """Copy of a spectral density with both densities and Rayleigh terms scaled."""
    from dataclasses import replace

    rho = replace(density.rho, rho=density.rho.rho * factor)
    rho_t = replace(density.rho_tilde, rho=density.rho_tilde.rho * factor)
    amps = tuple(factor * c for c in density.amplitudes)
    return replace(density, rho=rho, rho_tilde=rho_t, amplitudes=amps)


# --- far field ---

@dataclass(frozen=True)
class FarFieldFit:
    """Result of :func:`farfield_fit`.

    slope : log-log slope of ``|tau|`` against ``R``
    wavenumber : mean local radial phase rate ``d arg(tau) / dR``
    phase_speed : ``omega / wavenumber``
    outgoing : phase rate within ``phase_tol`` (relative) of ``+k``
    """

    slope: float
    wavenumber: float
    phase_speed: float
    outgoing: bool
    radii: np.ndarray
    magnitudes: np.ndarray

    def slope_ok(self, target: float = -0.5, tol: float = 0.02) -> bool:
        return abs(self.slope - target) <= tol


def farfield_fit(evaluator, theta: float, radii, k: float, omega: float = 1.0,
                 origin=(0.0, 0.0), phase_tol: float = 0.05) -> FarFieldFit:
    """Fit decay and radial phase of a field along a ray into the half-plane.

    Points are ``x = x0 + R sin(theta)``, ``z = z0 + R cos(theta)``, so
    ``theta = 0`` points straight down. The phase rate is measured from the
    ratio of samples ``0.1/k`` apart, which is unambiguous for any
    ``|rate| < 10 pi k``.
    """
    R = np.asarray(radii, dtype=float)
    if R.size < 3:
        raise ParameterError("need at least three radii")
    if R.min() * k < 10:
        raise ParameterError("far-field fit needs R k >= 10")
    if abs(theta) >= math.pi / 2:
        raise ParameterError("theta must point into the half-plane")
    x0, z0 = origin
    s, c = math.sin(theta), math.cos(theta)
    dR = 0.1 / k
    Rs = np.concatenate([R, R + dR])
    vals = np.asarray(evaluator(x0 + Rs * s, z0 + Rs * c), dtype=complex)
    v0, v1 = vals[: R.size], vals[R.size :]
    mag = np.abs(v0)
    if np.any(mag == 0) or not np.all(np.isfinite(mag)):
        raise ConvergenceError("far-field fit: zero or non-finite samples")
    slope, _ = np.polyfit(np.log(R), np.log(mag), 1)
    A = np.vstack([np.log(R), np.ones_like(R)]).T
    if np.linalg.cond(A) > 1e8:
        raise ConvergenceError("far-field fit is ill-conditioned")
    rate = float(np.mean(np.angle(v1 / v0)) / dR)
    outgoing = abs(rate - k) <= phase_tol * k
    speed = omega / rate if rate != 0 else math.inf
    return FarFieldFit(float(slope), rate, speed, bool(outgoing), R, mag)


def incoming_field(k: float, x0: float = 0.0, z0: float = 0.0):
    """Counterexample ``exp(-i k R)/sqrt(R)`` about ``(x0, z0)``."""
    def ev(x, z):
        r = np.hypot(np.asarray(x, float) - x0, np.asarray(z, float) - z0)
        return np.exp(-1j * k * r) / np.sqrt(r)

    return ev


def radiation_check(evaluator, theta: float, radii, k: float, origin=(0.0, 0.0)):
    """``|R (d tau/dR - i k tau)|`` along a ray (fourth-order central differences)."""
    R = np.asarray(radii, dtype=float)
    x0, z0 = origin
    s, c = math.sin(theta), math.cos(theta)
    d = 0.05 / k
    offs = np.array([-2, -1, 0, 1, 2]) * d
    pts = (R[:, None] + offs[None, :]).ravel()
    v = np.asarray(evaluator(x0 + pts * s, z0 + pts * c), dtype=complex).reshape(R.size, 5)
    dv = v @ _D1 / d
    return np.abs(R * (dv - 1j * k * v[:, 2]))


# --- suite ---

@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "threshold": self.threshold,
                "passed": self.passed}


def _check(name, value, threshold, passed=None):
    value = float(value)
    if passed is None:
        passed = value <= threshold
    return Check(name, value, float(threshold), bool(passed))


def _rel_l2(a, b):
    nb = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / nb) if nb > 0 else float(np.linalg.norm(a))


def manufactured_checks(kind: str, medium: Medium, settings=None, threads: int = 1,
                        fd_n: int = 21) -> list:
    """End-to-end, jump, zero-part, solvability, PDE and boundary checks for one kind."""
    from .global_relation import Settings, density_rho12, density_rho12_tilde, solve_density
    from .lax_oracle import direct_rho12, direct_rho12_tilde
    from .reconstruction import evaluate_grid, evaluate_points
    from .spectral_maps import physical_zeta

    settings = settings or Settings()
    h, l = medium.h, medium.l
    data, sol = make_manufactured(kind, medium)
    dens = solve_density(data, medium, settings, x_extent=2 / h)
    checks = []
    x = np.linspace(-2, 2, 21) / h
    z = np.linspace(0.5, 2, 21) / h
    g = evaluate_grid(dens, x, z, ("tau1", "tau2", "u", "w"), threads)
    X, Z = np.meshgrid(x, z)
    ex = sol.fields(X, Z)
    for f in ("tau1", "tau2", "u", "w"):
        nb = np.linalg.norm(ex[f])
        err = _rel_l2(g.values[f], ex[f]) if nb > 0 else float(np.abs(g.values[f]).max())
        checks.append(_check(f"{kind}/end_to_end/{f}", err, 1e-3))
    kap = np.linspace(-3.0, 3.0, 50) * h + 1e-3 * h
    pairs = []
    if sol.tau1.terms:
        zn = physical_zeta(kap, h)
        pairs.append(("rho", density_rho12(data, zn, medium), direct_rho12(sol.tau1, zn, medium)))
    if sol.tau2.terms:
        zn = physical_zeta(kap, l)
        pairs.append(("rho_tilde", density_rho12_tilde(data, zn, medium),
                      direct_rho12_tilde(sol.tau2, zn, medium)))
    for nm, a, b in pairs:
        checks.append(_check(f"{kind}/jump/{nm}", np.abs(a - b).max() / np.abs(b).max(), 1e-5))
    scale = dens.scale()
    checks.append(_check(f"{kind}/zero_parts", dens.zero_part_max / scale, 1e-6))
    checks.append(_check(f"{kind}/solvability", max(abs(v) for v in dens.solvability) / scale, 1e-5))
    checks.append(_check(f"{kind}/rayleigh_amplitude", max(abs(c) for c in dens.amplitudes) / scale, 1e-6))
    # PDE residuals of the reconstruction on a patch with step = wavelength/40
    k_fd = l if kind != "hankel_p" else h
    step = 2 * math.pi / k_fd / 40
    zc = max(1.2 / h, (fd_n // 2 + 2) * step)
    _, _, PX, PZ = fd_patch(0.3 / h, zc, step, fd_n)
    vals = evaluate_points(dens, PX.ravel(), PZ.ravel(), ("tau1", "tau2", "u", "w"), threads)
    vals = {f: v.reshape(PX.shape) for f, v in vals.items()}
    for f, k in (("tau1", h), ("tau2", l)):
        if np.abs(vals[f]).max() > 1e-8 * max(np.abs(vals["u"]).max(), 1e-300):
            checks.append(_check(f"{kind}/helmholtz/{f}", helmholtz_residual(vals[f], k, step), 1e-4))
    step_s = 2 * math.pi / l / 40
    if step_s != step:
        _, _, PX, PZ = fd_patch(0.3 / h, zc, step_s, fd_n)
        uw = evaluate_points(dens, PX.ravel(), PZ.ravel(), ("u", "w"), threads)
        uw = {f: v.reshape(PX.shape) for f, v in uw.items()}
    else:
        uw = vals
    checks.append(_check(f"{kind}/elastodynamic", max(elastodynamic_residual(uw["u"], uw["w"], medium, step_s)), 1e-3))
    xb = np.linspace(-3, 3, 25) / h
    checks.append(_check(f"{kind}/boundary", boundary_residual(dens, data, xb, threads), 1e-3))
    return checks


def gaussian_checks(medium: Medium, settings=None, threads: int = 1) -> list:
    """Boundary closure, far field and sensitivity checks on a Gaussian normal load."""
    from .boundary_data import gaussian_tzz
    from .global_relation import Settings, solve_density
    from .reconstruction import evaluate_points

    settings = settings or Settings()
    h = medium.h
    data = gaussian_tzz(1.0, 1.0 / h)
    checks = []
    dens = solve_density(data, medium, settings, x_extent=100 / h)
    xb = np.linspace(-4, 4, 33) / h
    base = boundary_residual(dens, data, xb, threads)
    checks.append(_check("gaussian/boundary", base, 1e-3))
    bad = boundary_residual(scaled_density(dens, 1.1), data, xb, threads)
    checks.append(_check("gaussian/corrupted_density_detected", bad - base, 0.05, passed=bad - base >= 0.05))

    def tau1(x, z):
        return evaluate_points(dens, x, z, ("tau1",), threads)["tau1"]

    R = np.geomspace(10, 100, 9) / h
    fit = farfield_fit(tau1, 0.3, R, h, medium.omega)
    checks.append(_check("gaussian/farfield_slope", abs(fit.slope + 0.5), 0.02))
    checks.append(_check("gaussian/farfield_outgoing", abs(fit.wavenumber / h - 1), 0.05, passed=fit.outgoing))
    inc = farfield_fit(incoming_field(h), 0.3, R, h, medium.omega)
    checks.append(_check("incoming_counterexample_rejected", inc.wavenumber / h, 0.0, passed=not inc.outgoing))
    return checks


def rayleigh_checks(medium: Medium, threads: int = 1) -> list:
    """Speed, determinant identity and pure Rayleigh-wave checks."""
    from .boundary_data import zero_tractions
    from .global_relation import (D0_prefactor, determinant, determinant_D0,
                                  rayleigh_mode_amplitudes, rayleigh_speed, scan_D0_root,
                                  solve_density)
    from .reconstruction import rayleigh_terms

    roots = rayleigh_speed(medium)
    checks = [_check("rayleigh/secular_residual", max(roots.residuals), 1e-10)]
    xs = scan_D0_root(medium)
    checks.append(_check("rayleigh/scan_vs_closed_form", abs(xs - roots.xi_c) / abs(roots.xi_c), 1e-6))
    rng = np.random.default_rng(0)
    xi = rng.uniform(-4, 4, 200) + 1j * rng.uniform(-4, 4, 200)
    D = np.asarray(determinant(xi, medium))
    D0 = np.asarray(determinant_D0(xi, medium))
    rel = np.abs(D - D0_prefactor(medium) * D0) / np.abs(D)
    checks.append(_check("determinant/D_vs_D0", rel.max(), 1e-12))
    dens = solve_density(zero_tractions(), medium)
    # the surface wave is shorter than the shear wave: step = its wavelength / 40
    step = 2 * math.pi / roots.kappa / 40
    _, _, PX, PZ = fd_patch(0.0, 1.0 / medium.h, step, 21)
    x = np.linspace(-5, 5, 41) / medium.h
    for direction in (1, -1):
        amps = rayleigh_mode_amplitudes(medium, direction)
        surf = rayleigh_terms(x, np.zeros_like(x), amps, dens, ("t_xz", "t_zz"))
        sc = rayleigh_terms(x, np.full_like(x, 1e-9), amps, dens, ("tau1",))["tau1"]
        scale = medium.lam2mu * medium.h**2 * np.abs(sc).max()
        tr = max(np.abs(surf["t_xz"]).max(), np.abs(surf["t_zz"]).max()) / scale
        checks.append(_check(f"pure_rayleigh/{direction:+d}/traction_free", tr, 1e-6))
        uw = rayleigh_terms(PX, PZ, amps, dens, ("u", "w"))
        checks.append(_check(f"pure_rayleigh/{direction:+d}/elastodynamic",
                             max(elastodynamic_residual(uw["u"], uw["w"], medium, step)), 1e-5))
    return checks


def run_verify_suite(medium: Medium, settings=None, threads: int = 1,
                     kinds=("hankel_p", "hankel_s", "mixed"), gaussian: bool = True) -> dict:
    """Run every check and return a JSON-ready report."""
    checks = rayleigh_checks(medium, threads)
    for kind in kinds:
        checks += manufactured_checks(kind, medium, settings, threads)
    if gaussian:
        checks += gaussian_checks(medium, settings, threads)
    ok = all(c.passed for c in checks)
    return {
        "medium": medium.as_dict(),
        "checks": [c.as_dict() for c in checks],
        "passed": ok,
        "n_checks": len(checks),
        "n_failed": sum(not c.passed for c in checks),
    }
