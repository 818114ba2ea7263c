"""Isotropic elastic medium and the derived wavenumbers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ParameterError


@dataclass(frozen=True)
class Medium:
    """Material constants at a fixed angular frequency.

    Only ``lam``, ``mu``, ``density`` and ``omega`` are free; every other
    attribute is derived in ``__post_init__``.
    """

    lam: float
    mu: float
    density: float
    omega: float
    h: float = field(init=False)
    l: float = field(init=False)
    a: float = field(init=False)
    alpha: float = field(init=False)
    beta_s: float = field(init=False)

    def __post_init__(self):
        for name in ("mu", "density", "omega"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be strictly positive, got {v!r}")
        if not math.isfinite(self.lam) or self.lam + 2 * self.mu <= 0:
            raise ParameterError(f"lambda + 2 mu must be positive, got lambda={self.lam!r}")
        h = math.sqrt(self.density * self.omega**2 / (self.lam + 2 * self.mu))
        l = math.sqrt(self.density * self.omega**2 / self.mu)
        r = l / h
        set_ = object.__setattr__
        set_(self, "h", h)
        set_(self, "l", l)
        set_(self, "a", r + math.sqrt(r * r - 1.0))
        set_(self, "alpha", self.omega / h)
        set_(self, "beta_s", self.omega / l)

    @property
    def lam2mu(self) -> float:
        return self.lam + 2 * self.mu

    @classmethod
    def poisson_solid(cls, mu: float = 1.0, density: float = 1.0, omega: float = 1.0) -> "Medium":
        """Poisson solid (lambda = mu), the regression baseline."""
        return cls(mu, mu, density, omega)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("lam", "mu", "density", "omega", "h", "l", "a", "alpha", "beta_s")}


def derive_medium(lam: float, mu: float, density: float, omega: float) -> Medium:
    """Validate the inputs and build a :class:`Medium`.

    All four inputs must be strictly positive.
    """
    if not lam > 0:
        raise ParameterError(f"lambda must be strictly positive, got {lam!r}")
    return Medium(lam, mu, density, omega)
