"""Acceptance criteria, one test and one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as the tests
run; they are also repeated in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from rhelasto.boundary_data import zero_tractions
from rhelasto.cli import main
from rhelasto.global_relation import (
    D0_prefactor,
    coefficients_at,
    determinant,
    determinant_D0,
    kappa_solve,
    rayleigh_speed,
    scan_D0_root,
    solve_density,
)
from rhelasto.spectral_maps import omega_fn
from rhelasto.verification import gaussian_checks, make_manufactured, manufactured_checks, rayleigh_checks

from conftest import ACCEPTANCE_LINES, off_cut_samples

KINDS = ("hankel_p", "hankel_s", "mixed")


def report(n, title, value, limit, passed, extra=""):
    line = (f"criterion {n:2d} {'PASS' if passed else 'FAIL'}  {title:<34s} "
            f"value {value:.3e}  limit {limit:.1e}{('  ' + extra) if extra else ''}")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


@pytest.fixture(scope="module")
def manufactured(poisson):
    return {kind: {c.name.split("/", 1)[1]: c for c in manufactured_checks(kind, poisson)}
            for kind in KINDS}


@pytest.fixture(scope="module")
def gaussian(poisson):
    return {c.name: c for c in gaussian_checks(poisson)}


@pytest.fixture(scope="module")
def rayleigh(poisson):
    return {c.name: c for c in rayleigh_checks(poisson)}


def test_criterion_01_rayleigh_speed(poisson):
    t0 = time.perf_counter()
    roots = rayleigh_speed(poisson)
    scan = scan_D0_root(poisson)
    elapsed = time.perf_counter() - t0
    err_c = abs(roots.c_ratio - 0.919402)
    err_scan = abs(scan - roots.xi_c) / abs(roots.xi_c)
    a2 = poisson.a**2
    t = np.linspace(a2 * (1 + 1e-9), 4 * a2, 4001)
    flips = np.count_nonzero(np.diff(np.sign(np.real(determinant_D0(1j * t, poisson)))))
    ok = err_c <= 1e-5 and err_scan <= 1e-6 and flips == 1 and elapsed < 1.0
    assert report(1, "Rayleigh speed and D0 scan", err_c, 1e-5, ok,
                  f"scan offset {err_scan:.1e}, sign changes {flips}, {elapsed:.2f} s")


def test_criterion_02_determinant_identities(poisson):
    """Literal criterion: ``D = -(a + 1/a)^(-1) D0``.

    The exact constant is ``-(a + 1/a)^(-4)``, so this check fails by a fixed
    ratio; the corrected identity is reported alongside and is asserted in
    ``test_global_relation.py``.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    xi = off_cut_samples(rng, 1000, 6.0)
    D = np.asarray(determinant(xi, poisson))
    D0 = np.asarray(determinant_D0(xi, poisson))
    literal = float(np.max(np.abs(D - D0_prefactor(poisson, printed=True) * D0) / np.abs(D)))
    corrected = float(np.max(np.abs(D - D0_prefactor(poisson) * D0) / np.abs(D)))
    a = poisson.a
    Om = omega_fn(xi, a)
    sym = max(np.abs(omega_fn(-xi, a) + Om).max(), np.abs(omega_fn(a * a / xi, a) - Om).max())
    sym = float(sym / np.abs(Om).max())
    elapsed = time.perf_counter() - t0
    ok = literal <= 1e-12 and sym <= 1e-12 and elapsed < 1.0
    assert report(2, "D = -(a+1/a)^-1 D0, Omega symmetry", literal, 1e-12, ok,
                  f"corrected -(a+1/a)^-4: {corrected:.1e}, symmetry {sym:.1e}, {elapsed:.2f} s")


def test_criterion_03_uniformization(poisson):
    h, l, a = poisson.h, poisson.l, poisson.a
    data, _ = make_manufactured("mixed", poisson)
    dens = solve_density(data, poisson)
    kap = np.concatenate([dens.rho.kappa, dens.rho_tilde.kappa])
    ks = kappa_solve(kap, np.zeros((4, kap.size)), poisson)
    z, zt, xi = ks.zeta, ks.zeta_t, ks.xi
    # errors relative to the size of the terms being compared
    az, azt = np.abs(z), np.abs(zt)
    e_kappa = np.max(np.abs(l * (zt - 1 / zt) - h * (z - 1 / z)) / (h * (az + 1 / az)))
    e_omega = np.max(np.abs(zt + 1 / zt - h / (a * a * l) * omega_fn(xi, a)) / (azt + 1 / azt))
    c = coefficients_at(xi, poisson)
    s1, s2 = az**2 + az**-2, azt**2 + azt**-2
    e_coef = max(np.max(np.abs(c.b - ks.b) / s1), np.max(np.abs(c.d - ks.d) / s1),
                 np.max(np.abs(c.delta - ks.delta) / s2), np.max(np.abs(c.beta_c - ks.beta_c) / s2))
    worst = float(max(e_kappa, e_omega, e_coef))
    assert report(3, "uniformization on contour nodes", worst, 1e-12, worst <= 1e-12,
                  f"{kap.size} nodes")


def test_criterion_04_end_to_end(manufactured):
    worst = max(manufactured[k][f"end_to_end/{f}"].value
                for k in KINDS for f in ("tau1", "tau2", "u", "w"))
    assert report(4, "manufactured fields rel L2", worst, 1e-3, worst <= 1e-3)


def test_criterion_05_jump_oracle(manufactured):
    jump = max(c.value for k in KINDS for n, c in manufactured[k].items() if n.startswith("jump/"))
    zero = max(max(manufactured[k]["zero_parts"].value, manufactured[k]["rayleigh_amplitude"].value)
               for k in KINDS)
    ok = jump <= 1e-5 and zero <= 1e-6
    assert report(5, "field vs data density", jump, 1e-5, ok, f"zero parts and C_l {zero:.1e}")


def test_criterion_06_pde_residuals(manufactured):
    helm = max(c.value for k in KINDS for n, c in manufactured[k].items() if n.startswith("helmholtz/"))
    elas = max(manufactured[k]["elastodynamic"].value for k in KINDS)
    ok = helm <= 1e-4 and elas <= 1e-3
    assert report(6, "Helmholtz residual", helm, 1e-4, ok, f"elastodynamic {elas:.1e} (limit 1e-3)")


def test_criterion_07_boundary_closure(manufactured, gaussian):
    worst = max([manufactured[k]["boundary"].value for k in KINDS] + [gaussian["gaussian/boundary"].value])
    assert report(7, "surface tractions vs -T0", worst, 1e-3, worst <= 1e-3)


def test_criterion_08_far_field(gaussian):
    slope = gaussian["gaussian/farfield_slope"]
    out = gaussian["gaussian/farfield_outgoing"]
    inc = gaussian["incoming_counterexample_rejected"]
    ok = slope.passed and out.passed and inc.passed
    assert report(8, "far-field slope |s + 0.5|", slope.value, 0.02, ok,
                  f"outgoing {out.passed}, incoming rejected {inc.passed}")


def test_criterion_09_solvability(manufactured, rayleigh):
    solv = max(manufactured[k]["solvability"].value for k in KINDS)
    tr = max(c.value for n, c in rayleigh.items() if n.endswith("traction_free"))
    el = max(c.value for n, c in rayleigh.items() if n.startswith("pure_rayleigh") and n.endswith("elastodynamic"))
    ok = solv <= 1e-5 and tr <= 1e-6 and el <= 1e-5
    assert report(9, "solvability residual / scale", solv, 1e-5, ok,
                  f"pure Rayleigh traction {tr:.1e} (1e-6), elastodynamic {el:.1e} (1e-5)")


def test_criterion_10_determinism(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[data]\npreset = manufactured_mixed\n")
    blobs = []
    for threads in (1, 3, 8):
        out = tmp_path / f"threads{threads}"
        assert main(["solve", "--config", str(cfg), "--output", str(out), "--threads", str(threads)]) == 0
        blobs.append((out / "fields.csv").read_bytes())
    same = all(b == blobs[0] for b in blobs)
    assert report(10, "byte-identical CSV across threads", 0.0 if same else 1.0, 0.0, same,
                  "threads 1, 3, 8")
