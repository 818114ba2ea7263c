"""Run configuration: INI sections, validation and environment overrides.

Example::

    [medium]
    preset = poisson_solid

    [data]
    preset = gaussian_tzz
    amplitude = 1.0
    width = 1.7320508

    [grid]
    x_min = -3.46
    x_max = 3.46
    x_count = 21
    z_min = 0.87
    z_max = 3.46
    z_count = 21

    [numerics]
    quad_order = 20

Every key can be overridden by an environment variable
``RHELASTO_<SECTION>_<KEY>`` (for instance ``RHELASTO_NUMERICS_QUAD_ORDER``);
command-line flags override both.
"""
from __future__ import annotations

import configparser
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParameterError
from .medium import Medium

ENV_PREFIX = "RHELASTO_"

DATA_PRESETS = (
    "zero",
    "gaussian_tzz",
    "gaussian_txz",
    "manufactured_hankel_p",
    "manufactured_hankel_s",
    "manufactured_mixed",
    "csv",
)

# section -> key -> (type, default)
SCHEMA = {
    "medium": {
        "preset": (str, "poisson_solid"),
        "lambda": (float, None),
        "mu": (float, None),
        "density": (float, None),
        "omega": (float, None),
    },
    "data": {
        "preset": (str, "gaussian_tzz"),
        "amplitude": (float, 1.0),
        "width": (float, None),
        "center": (float, 0.0),
        "source_x": (float, 0.25),
        "source_depth": (float, -1.0),
        "path": (str, None),
    },
    "grid": {
        "x_min": (float, None),
        "x_max": (float, None),
        "x_count": (int, 21),
        "z_min": (float, None),
        "z_max": (float, None),
        "z_count": (int, 21),
    },
    "numerics": {
        "quad_order": (int, 20),
        "ray_truncation": (float, None),
        "zmin": (float, None),
        "pole_tol": (float, 1e-8),
        "x_order": (int, 20),
        "threads": (int, 1),
    },
    "output": {
        "directory": (str, "rhelasto_out"),
        "fields": (str, "tau1,tau2,u,w,t_xz,t_zz"),
    },
}

RANGES = {
    ("numerics", "quad_order"): (4, 64),
    ("numerics", "x_order"): (4, 64),
    ("numerics", "threads"): (1, 256),
    ("grid", "x_count"): (1, 100000),
    ("grid", "z_count"): (1, 100000),
}


class ConfigError(ParameterError):
    """Invalid configuration; ``line`` is the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class RunConfig:
    medium: Medium
    data: dict
    grid: dict
    numerics: dict
    output: dict
    source: str = "<defaults>"
    raw: dict = field(default_factory=dict)

    def settings(self):
        from .global_relation import Settings

        n = self.numerics
        return Settings(order=n["quad_order"], truncation=n["ray_truncation"], z_min=n["zmin"],
                        pole_tol=n["pole_tol"], x_order=n["x_order"])

    def grid_nodes(self):
        import numpy as np

        g = self.grid
        return (np.linspace(g["x_min"], g["x_max"], g["x_count"]),
                np.linspace(g["z_min"], g["z_max"], g["z_count"]))

    def fields(self) -> tuple:
        return tuple(f.strip() for f in self.output["fields"].split(",") if f.strip())

    def as_dict(self) -> dict:
        return {
            "medium": self.medium.as_dict(),
            "data": dict(self.data),
            "grid": dict(self.grid),
            "numerics": dict(self.numerics),
            "output": dict(self.output),
        }


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    current = None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[(.+)\]$", s)
        if m:
            current = m.group(1).strip().lower()
            if key is None and current == section:
                return i
            continue
        if key is not None and current == section:
            k = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
            if k == key:
                return i
    return None


def _convert(typ, value: str, where: str, line):
    try:
        if typ is int:
            return int(value)
        if typ is float:
            return float(value)
    except ValueError:
        raise ConfigError(f"{where}: cannot read {value!r} as {typ.__name__}", line) from None
    return value


def parse_config(text: str = "", env: dict | None = None, overrides: dict | None = None,
                 source: str = "<string>") -> RunConfig:
    """Parse and validate a configuration.

    ``env`` defaults to ``os.environ``; ``overrides`` maps ``(section, key)``
    to already-typed values and wins over both file and environment.
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str.lower
    try:
        cp.read_string(text, source=source)
    except configparser.DuplicateOptionError as e:
        raise ConfigError(f"duplicate key {e.option!r} in [{e.section}]", e.lineno) from None
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"duplicate section [{e.section}]", e.lineno) from None
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("key outside any section", e.lineno) from None
    except configparser.ParsingError as e:
        line = e.errors[0][0] if getattr(e, "errors", None) else None
        raise ConfigError("cannot parse line", line) from None

    values = {sec: {k: d for k, (_, d) in keys.items()} for sec, keys in SCHEMA.items()}
    for sec in cp.sections():
        if sec not in SCHEMA:
            raise ConfigError(f"unknown section [{sec}]", _line_of(text, sec))
        for key, raw in cp.items(sec):
            line = _line_of(text, sec, key)
            if key not in SCHEMA[sec]:
                raise ConfigError(f"unknown key {key!r} in [{sec}]", line)
            typ = SCHEMA[sec][key][0]
            values[sec][key] = _convert(typ, raw.strip(), f"[{sec}] {key}", line)

    env = os.environ if env is None else env
    for name, raw in env.items():
        if not name.startswith(ENV_PREFIX):
            continue
        rest = name[len(ENV_PREFIX):].lower()
        for sec in SCHEMA:
            if rest.startswith(sec + "_") and rest[len(sec) + 1:] in SCHEMA[sec]:
                key = rest[len(sec) + 1:]
                values[sec][key] = _convert(SCHEMA[sec][key][0], raw, f"environment {name}", None)
                break
        else:
            raise ConfigError(f"unknown environment override {name}")

    for (sec, key), v in (overrides or {}).items():
        if v is not None:
            values[sec][key] = v

    def fail(msg, sec, key=None):
        raise ConfigError(msg, _line_of(text, sec, key))

    for (sec, key), (lo, hi) in RANGES.items():
        v = values[sec][key]
        if not lo <= v <= hi:
            fail(f"{key} = {v} outside [{lo}, {hi}]", sec, key)
    n = values["numerics"]
    if n["ray_truncation"] is not None and not n["ray_truncation"] > 1:
        fail("ray_truncation must exceed 1", "numerics", "ray_truncation")
    if n["zmin"] is not None and not n["zmin"] > 0:
        fail("zmin must be positive", "numerics", "zmin")
    if not 0 < n["pole_tol"] < 1:
        fail("pole_tol must lie in (0, 1)", "numerics", "pole_tol")

    med = values["medium"]
    given = [med[k] is not None for k in ("lambda", "mu", "density", "omega")]
    try:
        if any(given):
            if not all(given):
                fail("lambda, mu, density and omega must be given together", "medium")
            medium = Medium(med["lambda"], med["mu"], med["density"], med["omega"])
            med["preset"] = "custom"
        elif med["preset"] == "poisson_solid":
            medium = Medium.poisson_solid()
        else:
            fail(f"unknown medium preset {med['preset']!r}", "medium", "preset")
    except ParameterError as e:
        if isinstance(e, ConfigError):
            raise
        fail(str(e), "medium")

    d = values["data"]
    if d["preset"] not in DATA_PRESETS:
        fail(f"unknown data preset {d['preset']!r} (choose from {', '.join(DATA_PRESETS)})", "data", "preset")
    if d["width"] is None:
        d["width"] = 1.0 / medium.h
    if not d["width"] > 0:
        fail("width must be positive", "data", "width")
    if d["preset"].startswith("manufactured") and not d["source_depth"] < 0:
        fail("source_depth must be negative (source outside the half-plane)", "data", "source_depth")
    if d["preset"] == "csv":
        if not d["path"]:
            fail("csv data need a path", "data")
        p = Path(d["path"])
        if not p.is_absolute() and source not in ("<string>", "<defaults>"):
            p = Path(source).parent / p
        if not p.exists():
            fail(f"data file {str(p)!r} does not exist", "data", "path")
        d["path"] = str(p)

    g = values["grid"]
    h = medium.h
    for key, dflt in (("x_min", -2 / h), ("x_max", 2 / h), ("z_min", 0.5 / h), ("z_max", 2 / h)):
        if g[key] is None:
            g[key] = dflt
    if g["x_max"] < g["x_min"] or g["z_max"] < g["z_min"]:
        fail("grid bounds must be increasing", "grid")
    zfloor = n["zmin"] if n["zmin"] is not None else 1e-3 / h
    if g["z_min"] < zfloor:
        fail(f"grid z_min {g['z_min']:g} below the evaluation floor {zfloor:g}", "grid", "z_min")

    from .reconstruction import FIELDS

    for f in values["output"]["fields"].split(","):
        if f.strip() and f.strip() not in FIELDS:
            fail(f"unknown output field {f.strip()!r}", "output", "fields")

    return RunConfig(medium, d, g, n, values["output"], source=source, raw=values)


def load_config(path=None, env=None, overrides=None) -> RunConfig:
    if path is None:
        return parse_config("", env, overrides, source="<defaults>")
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {str(p)!r} does not exist")
    return parse_config(p.read_text(), env, overrides, source=str(p))


def build_data(cfg: RunConfig):
    """Traction data (and the manufactured solution, if any) described by the config."""
    from . import boundary_data as bd

    d = cfg.data
    p = d["preset"]
    if p == "zero":
        return bd.zero_tractions(), None
    if p == "gaussian_tzz":
        return bd.gaussian_tzz(d["amplitude"], d["width"], d["center"]), None
    if p == "gaussian_txz":
        return bd.gaussian_txz(d["amplitude"], d["width"], d["center"]), None
    if p == "csv":
        return bd.load_traction_csv(d["path"]), None
    from .verification import make_manufactured

    kind = p[len("manufactured_"):]
    return make_manufactured(kind, cfg.medium, d["source_x"], d["source_depth"], d["amplitude"])
