"""Fields from the sampled densities.

Each potential is a sum over contour nodes of plane waves
``exp(i q z - i kappa x)`` weighted by ``(k^2/4 pi) w rho / node``, where
``q = (k/2)(node + 1/node)`` and ``kappa`` is the node's horizontal
wavenumber. Spatial derivatives multiply the weights by ``-i kappa`` and
``i q``, so displacements and stresses never need finite differences.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, ParameterError
from .global_relation import SpectralDensity
from .medium import Medium

FIELDS = ("tau1", "tau2", "u", "w", "t_xz", "t_zz")


def _multipliers(kappa, q, medium: Medium, which: str, plane: str):
    """Spectral multiplier of one output field for P (zeta) or S (zeta-tilde) nodes."""
    h2, l2 = medium.h**2, medium.l**2
    lam, mu = medium.lam, medium.mu
    one = np.ones_like(kappa, dtype=complex)
    zero = np.zeros_like(kappa, dtype=complex)
    if plane == "zeta":
        table = {
            "tau1": one,
            "tau2": zero,
            "u": 2j * kappa / h2,
            "w": -2j * q / h2,
            "t_xz": -4 * mu * kappa * q / h2,
            "t_zz": 2 * (lam * kappa**2 + (lam + 2 * mu) * q**2) / h2,
        }
    else:
        table = {
            "tau1": zero,
            "tau2": one,
            "u": 2j * q / l2,
            "w": 2j * kappa / l2,
            "t_xz": 2 * mu * (kappa**2 - q**2) / l2,
            "t_zz": -4 * mu * kappa * q / l2,
        }
    return table[which]


@dataclass
class FieldGrid:
    """Fields on a tensor grid; arrays have shape ``(len(z_nodes), len(x_nodes))``."""

    x_nodes: np.ndarray
    z_nodes: np.ndarray
    values: dict
    rayleigh_amplitudes: tuple = (0j, 0j, 0j, 0j)
    notes: dict = field(default_factory=dict)

    def __getattr__(self, name):
        if name in FIELDS and name in self.__dict__.get("values", {}):
            return self.values[name]
        raise AttributeError(name)


def _plane_waves(density: SpectralDensity, fields, medium):
    """Stack nodes of both contours with per-field coefficient vectors."""
    kap, qs, coefs = [], [], {f: [] for f in fields}
    for cd in (density.rho, density.rho_tilde):
        base = cd.integrand_weights()
        kap.append(cd.kappa)
        qs.append(cd.q)
        for f in fields:
            coefs[f].append(base * _multipliers(cd.kappa, cd.q, medium, f, cd.plane))
    return (np.concatenate(kap), np.concatenate(qs), {f: np.concatenate(v) for f, v in coefs.items()})


def _eval_chunk(x, z, kap, q, coefs, fields):
    E = np.exp(1j * (q[None, :] * z[:, None] - kap[None, :] * x[:, None]))
    return {f: (E * coefs[f][None, :]).sum(axis=1) for f in fields}


def rayleigh_terms(x, z, amplitudes, density: SpectralDensity, fields=FIELDS):
    """Addition terms ``C exp(i q_c z -+ i kappa_R x)`` with their derivatives."""
    medium = density.medium
    res = density.residues
    kR = density.roots.kappa
    C1, C2, C1t, C2t = amplitudes
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    out = {f: np.zeros(np.broadcast(x, z).shape, dtype=complex) for f in fields}
    for plane, q, pairs in (
        ("zeta", res.q_p, ((C1, kR), (C2, -kR))),
        ("zeta_tilde", res.q_s, ((C1t, kR), (C2t, -kR))),
    ):
        for C, kap in pairs:
            if C == 0:
                continue
            e = C * np.exp(1j * (q * z - kap * x))
            ka = np.array([kap], dtype=complex)
            qa = np.array([q], dtype=complex)
            for f in fields:
                out[f] = out[f] + e * _multipliers(ka, qa, medium, f, plane)[0]
    return out


def evaluate_points(density: SpectralDensity, x, z, fields=FIELDS, threads: int = 1,
                    include_rayleigh: bool = True, chunk: int = 64) -> dict:
    """Fields at scattered points ``(x_i, z_i)``; ``z`` must be positive."""
    x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    z = np.atleast_1d(np.asarray(z, dtype=float)).ravel()
    x, z = np.broadcast_arrays(x, z)
    if np.any(z <= 0):
        raise DomainError("field points must have z > 0 (use boundary_values for z = 0)")
    for f in fields:
        if f not in FIELDS:
            raise ParameterError(f"unknown field {f!r}")
    kap, q, coefs = _plane_waves(density, fields, density.medium)
    starts = list(range(0, x.size, chunk))

    def work(s):
        return _eval_chunk(x[s : s + chunk], z[s : s + chunk], kap, q, coefs, fields)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    out = {f: np.concatenate([p[f] for p in parts]) if parts else np.zeros(0, complex) for f in fields}
    if include_rayleigh and density.residues is not None:
        rt = rayleigh_terms(x, z, density.amplitudes, density, fields)
        for f in fields:
            out[f] = out[f] + rt[f]
    return out


def tau1_at(x, z, density: SpectralDensity, **kw):
    return _single(evaluate_points(density, x, z, ("tau1",), **kw)["tau1"], x, z)


def tau2_at(x, z, density: SpectralDensity, **kw):
    return _single(evaluate_points(density, x, z, ("tau2",), **kw)["tau2"], x, z)


def displacements_at(x, z, density: SpectralDensity, **kw):
    r = evaluate_points(density, x, z, ("u", "w"), **kw)
    return _single(r["u"], x, z), _single(r["w"], x, z)


def stresses_at(x, z, density: SpectralDensity, **kw):
    r = evaluate_points(density, x, z, ("t_xz", "t_zz"), **kw)
    return _single(r["t_xz"], x, z), _single(r["t_zz"], x, z)


def _single(v, x, z):
    shape = np.broadcast(np.asarray(x), np.asarray(z)).shape
    v = v.reshape(shape)
    return v.item() if v.ndim == 0 else v


def evaluate_grid(density: SpectralDensity, x_nodes, z_nodes, fields=FIELDS, threads: int = 1,
                  include_rayleigh: bool = True) -> FieldGrid:
    x_nodes = np.asarray(x_nodes, dtype=float)
    z_nodes = np.asarray(z_nodes, dtype=float)
    zmin = density.settings.zmin(density.medium)
    if np.any(z_nodes < zmin * (1 - 1e-12)):
        raise DomainError(f"grid heights must be >= z_min = {zmin:g}")
    X, Z = np.meshgrid(x_nodes, z_nodes)
    vals = evaluate_points(density, X.ravel(), Z.ravel(), fields, threads, include_rayleigh)
    vals = {f: v.reshape(X.shape) for f, v in vals.items()}
    amps = density.amplitudes if include_rayleigh else (0j, 0j, 0j, 0j)
    return FieldGrid(x_nodes, z_nodes, vals, amps)


def add_rayleigh_terms(grid: FieldGrid, C1, C2, C1t, C2t, density: SpectralDensity) -> FieldGrid:
    """Return a copy of ``grid`` with the four Rayleigh addition terms added."""
    X, Z = np.meshgrid(grid.x_nodes, grid.z_nodes)
    rt = rayleigh_terms(X, Z, (C1, C2, C1t, C2t), density, tuple(grid.values))
    vals = {f: grid.values[f] + rt[f] for f in grid.values}
    amps = tuple(a + b for a, b in zip(grid.rayleigh_amplitudes, (C1, C2, C1t, C2t)))
    return replace(grid, values=vals, rayleigh_amplitudes=amps)


def rayleigh_exponents(density: SpectralDensity):
    """``(i q_p, i q_s, i kappa_R)``: z-exponents of the P and S parts and the x-phase rate."""
    r = density.residues
    return 1j * r.q_p, 1j * r.q_s, 1j * density.roots.kappa


def boundary_values(density: SpectralDensity, x, fields=("t_xz", "t_zz"), threads: int = 1) -> dict:
    """Traces at ``z = 0`` by Richardson extrapolation from ``z_min, 2 z_min, 4 z_min``."""
    z0 = density.settings.zmin(density.medium)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    vals = [evaluate_points(density, x, np.full(x.shape, s * z0), fields, threads) for s in (1, 2, 4)]
    return {f: (8 * vals[0][f] - 6 * vals[1][f] + vals[2][f]) / 3 for f in fields}


def phi_at(zeta_eval, x, z, density: SpectralDensity, near_tol: float = 1e-6) -> complex:
    """Cauchy integral ``(1/2 pi i) int_K e(s) rho(s) / (s - zeta) ds`` at an off-contour point.

    ``e(s) = exp(i q(s) z - i kappa(s) x)``. Rayleigh poles contribute their
    half-residues, as in the potentials.
    """
    zeta_eval = complex(zeta_eval)
    cd = density.rho
    d = np.abs(cd.nodes - zeta_eval)
    if d.min() < near_tol * max(1.0, abs(zeta_eval)):
        raise DomainError("evaluation point too close to the contour")
    e = np.exp(1j * (cd.q * z - cd.kappa * x))
    val = np.sum(cd.weights * e * cd.rho / (cd.nodes - zeta_eval)) / (2j * np.pi)
    res = density.residues
    if res is not None:
        kR = density.roots.kappa
        for sgn, r, zc, kap in ((-1, res.res_upper, res.zeta_upper, kR), (1, res.res_lower, res.zeta_lower, -kR)):
            ec = np.exp(1j * (res.q_p * z - kap * x))
            # residue of rho is r * zc (r is the residue of rho/zeta)
            val += sgn * 0.5 * ec * r * zc / (zc - zeta_eval)
    return complex(val)
