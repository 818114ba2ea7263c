"""Command-line entry point ``rhelasto``.

Subcommands:

rayleigh   Rayleigh speed and determinant roots of the configured medium.
spectral   Sampled densities on both contours (CSV).
solve      Fields on the configured grid (CSV) plus a JSON manifest.
verify     Oracle and residual suite (JSON report); nonzero exit on failure.
selftest   Data-free identity checks.

Exit status: 0 on success, 1 when a check fails, 2 on configuration errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ENV_PREFIX, ConfigError, RunConfig, build_data, load_config
from .errors import RhelastoError

SCHEMA_VERSION = 1
CSV_FMT = "%.17g"

log = logging.getLogger("rhelasto")


def _write_csv(path: Path, header, columns) -> str:
    arr = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, arr, fmt=CSV_FMT, delimiter=",")
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"not serialisable: {type(v)}")


def _cplx(v):
    return [float(np.real(v)), float(np.imag(v))]


def _manifest(cfg: RunConfig, command: str, threads: int, extra: dict) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "command": command,
        "config_source": cfg.source,
        "config": cfg.as_dict(),
        "threads": threads,
        "csv_format": CSV_FMT,
    }
    out.update(extra)
    return out


def _outdir(cfg: RunConfig) -> Path:
    p = Path(cfg.output["directory"])
    p.mkdir(parents=True, exist_ok=True)
    return p


# --- subcommands ---

def cmd_rayleigh(cfg: RunConfig, args) -> int:
    from .global_relation import D0_prefactor, rayleigh_speed

    r = rayleigh_speed(cfg.medium)
    print(f"c          = {r.c:.12g}")
    print(f"c/beta_s   = {r.c_ratio:.12g}")
    print(f"xi_c       = {r.xi_c.real:.12g}{r.xi_c.imag:+.12g}j")
    print(f"a^2/xi_c   = {r.xi_c_conj.real:.12g}{r.xi_c_conj.imag:+.12g}j")
    print(f"|D(xi_c)|  = {r.residuals[0]:.3e}")
    print(f"|D(a^2/xi_c)| = {r.residuals[1]:.3e}")
    if r.scan_xi is not None:
        print(f"D0 scan root relative offset = {abs(r.scan_xi - r.xi_c) / abs(r.xi_c):.3e}")
    print(f"D/D0 factor = {D0_prefactor(cfg.medium):.12g}")
    if args.output is not None:
        _write_json(_outdir(cfg) / "rayleigh.json",
                    _manifest(cfg, "rayleigh", 1, {"rayleigh": r.as_dict()}))
    return 0


def _solve(cfg: RunConfig, threads: int):
    from .global_relation import solve_density

    data, sol = build_data(cfg)
    x, z = cfg.grid_nodes()
    extent = float(max(abs(x[0]), abs(x[-1])))
    dens = solve_density(data, cfg.medium, cfg.settings(), x_extent=extent)
    return data, sol, dens


def cmd_spectral(cfg: RunConfig, args) -> int:
    _, _, dens = _solve(cfg, args.threads)
    out = _outdir(cfg)
    files = {}
    segments = {}
    for name, cd in (("rho", dens.rho), ("rho_tilde", dens.rho_tilde)):
        names, seg_id = np.unique(np.asarray(cd.segment).astype(str), return_inverse=True)
        segments[name] = names.tolist()
        header = ["kappa", "node_re", "node_im", "weight_re", "weight_im", "q_re", "q_im",
                  "rho_re", "rho_im", "segment"]
        cols = [cd.kappa, cd.nodes.real, cd.nodes.imag, cd.weights.real, cd.weights.imag,
                cd.q.real, cd.q.imag, cd.rho.real, cd.rho.imag, seg_id]
        files[f"{name}.csv"] = _write_csv(out / f"{name}.csv", header, cols)
    extra = {
        "files": files,
        "segment_names": segments,
        "rayleigh": dens.roots.as_dict(),
        "rayleigh_amplitudes": [_cplx(c) for c in dens.amplitudes],
        "solvability": [_cplx(c) for c in dens.solvability],
        "zero_part_max": dens.zero_part_max,
        "kappa_max": dens.kappa_max,
        "info": dens.info,
    }
    _write_json(out / "manifest.json", _manifest(cfg, "spectral", args.threads, extra))
    print(f"wrote {', '.join(files)} to {out}")
    return 0


def cmd_solve(cfg: RunConfig, args) -> int:
    from .reconstruction import evaluate_grid

    _, sol, dens = _solve(cfg, args.threads)
    x, z = cfg.grid_nodes()
    fields = cfg.fields()
    grid = evaluate_grid(dens, x, z, fields, threads=args.threads)
    X, Z = np.meshgrid(x, z)
    header = ["x", "z"]
    cols = [X.ravel(), Z.ravel()]
    for f in fields:
        header += [f"{f}_re", f"{f}_im"]
        cols += [grid.values[f].real.ravel(), grid.values[f].imag.ravel()]
    out = _outdir(cfg)
    digest = _write_csv(out / "fields.csv", header, cols)
    extra = {
        "files": {"fields.csv": digest},
        "grid_shape": [len(z), len(x)],
        "settings": {
            "quad_order": dens.settings.order,
            "ray_truncation": dens.settings.truncation,
            "zmin": dens.settings.zmin(cfg.medium),
            "pole_tol": dens.settings.pole_tol,
            "x_order": dens.settings.x_order,
        },
        "rayleigh": dens.roots.as_dict(),
        "rayleigh_amplitudes": [_cplx(c) for c in dens.amplitudes],
        "solvability": [_cplx(c) for c in dens.solvability],
        "zero_part_max": dens.zero_part_max,
        "info": dens.info,
    }
    if sol is not None:
        ex = sol.fields(X, Z)
        errs = {}
        for f in fields:
            nb = np.linalg.norm(ex[f])
            diff = np.linalg.norm(grid.values[f] - ex[f])
            errs[f] = float(diff / nb) if nb > 0 else float(diff)
        extra["manufactured_rel_l2"] = errs
    _write_json(out / "manifest.json", _manifest(cfg, "solve", args.threads, extra))
    print(f"wrote fields.csv ({len(z)}x{len(x)}) to {out}")
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    from .verification import run_verify_suite

    t0 = time.perf_counter()
    report = run_verify_suite(cfg.medium, cfg.settings(), threads=args.threads)
    report["elapsed_s"] = time.perf_counter() - t0
    report["schema_version"] = SCHEMA_VERSION
    for c in report["checks"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']:<45s} {c['value']:.3e}  (limit {c['threshold']:.1e})")
    _write_json(_outdir(cfg) / "verify_report.json", report)
    print(f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed")
    return 0 if report["passed"] else 1


def selftest_checks(cfg: RunConfig) -> list:
    """Identity checks that need no boundary data."""
    from .boundary_data import zero_tractions
    from .global_relation import (
        coefficients_at, coefficients_zeta, coefficients_zeta_tilde, solve_density,
    )
    from .reconstruction import evaluate_points
    from .spectral_maps import omega_fn, zeta_tilde_from_xi
    from .verification import _check, rayleigh_checks

    m = cfg.medium
    h, l, a = m.h, m.l, m.a
    checks = [c for c in rayleigh_checks(m) if not c.name.startswith("pure_rayleigh")]
    rng = np.random.default_rng(1)
    xi = rng.uniform(-5, 5, 500) + 1j * rng.uniform(-5, 5, 500)
    Om = omega_fn(xi, a)
    sym = max(np.abs(omega_fn(-xi, a) + Om).max(), np.abs(omega_fn(a * a / xi, a) - Om).max())
    checks.append(_check("omega_symmetries", sym / np.abs(Om).max(), 1e-12))
    zt = zeta_tilde_from_xi(xi, m)
    z = xi / a
    unif = np.abs(l * (zt - 1 / zt) - h * (z - 1 / z)) / np.abs(h * (z - 1 / z))
    checks.append(_check("uniformization/kappa", unif.max(), 1e-12))
    qs = np.abs(zt + 1 / zt - h / (a * a * l) * Om) / np.abs(zt + 1 / zt)
    checks.append(_check("uniformization/q", qs.max(), 1e-12))
    c = coefficients_at(xi, m)
    b, d = coefficients_zeta(z, m)
    de, be = coefficients_zeta_tilde(zt)
    cf = max(np.abs(c.b - b).max() / np.abs(b).max(), np.abs(c.d - d).max() / np.abs(d).max(),
             np.abs(c.delta - de).max() / np.abs(de).max(), np.abs(c.beta_c - be).max() / np.abs(be).max())
    checks.append(_check("coefficient_forms", cf, 1e-12))
    dens = solve_density(zero_tractions(), m)
    vals = evaluate_points(dens, np.linspace(-1, 1, 5), np.ones(5))
    checks.append(_check("zero_data_zero_fields", max(np.abs(v).max() for v in vals.values()), 0.0))
    return checks


def cmd_selftest(cfg: RunConfig, args) -> int:
    checks = selftest_checks(cfg)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<35s} {c.value:.3e}  (limit {c.threshold:.1e})")
    ok = all(c.passed for c in checks)
    print("selftest", "passed" if ok else "FAILED")
    return 0 if ok else 1


COMMANDS = {
    "rayleigh": cmd_rayleigh,
    "spectral": cmd_spectral,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rhelasto",
        description="Spectral solver for the stress-loaded elastodynamic half-plane.",
        epilog=f"Every config key can be overridden by {ENV_PREFIX}<SECTION>_<KEY> environment variables.",
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", type=Path, help="INI run configuration")
    p.add_argument("--output", type=Path, help="output directory")
    p.add_argument("--threads", type=int, help="worker threads for field evaluation")
    p.add_argument("--quad-order", type=int, help="Gauss-Legendre nodes per contour panel")
    p.add_argument("--ray-truncation", type=float, help="ray cutoff t_max (default: from data decay)")
    p.add_argument("--zmin", type=float, help="smallest evaluation height")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"rhelasto {__version__}")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {
        ("numerics", "quad_order"): args.quad_order,
        ("numerics", "ray_truncation"): args.ray_truncation,
        ("numerics", "zmin"): args.zmin,
        ("numerics", "threads"): args.threads,
        ("output", "directory"): str(args.output) if args.output is not None else None,
    }
    try:
        cfg = load_config(args.config, overrides=overrides)
    except ConfigError as e:
        print(f"rhelasto: configuration error: {e}", file=sys.stderr)
        return 2
    args.threads = cfg.numerics["threads"]
    log.info("running %s with %s", args.command, cfg.source)
    try:
        return COMMANDS[args.command](cfg, args)
    except RhelastoError as e:
        print(f"rhelasto: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
