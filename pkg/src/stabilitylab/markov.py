"""Empirical probes of the resampling steps: Metropolis-Hastings and Langevin.

All functions are vectorised over independent chains: ``x`` may hold one
point per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ZeroDensityAtStart
from .laws import Law, make_law


@dataclass(frozen=True)
class DensityModel:
    """Product density on R^d built from a one-dimensional law."""

    law: Law
    d: int = 1

    @property
    def name(self) -> str:
        return self.law.name

    def logpdf(self, x) -> np.ndarray:
        lp = self.law.logpdf(x)
        return lp if self.d == 1 else np.sum(lp, axis=-1)

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        shape = (size,) if self.d == 1 else (size, self.d)
        return self.law.sample(rng, shape)

    def grad_potential(self, x) -> np.ndarray:
        """Gradient of rho = -log f (coordinatewise for product densities)."""
        x = np.asarray(x, dtype=float)
        p = self.law.params
        name = self.law.name
        if name == "gaussian":
            mu, sd = p or (0.0, 1.0)
            return (x - mu) / sd**2
        if name == "exponential":
            (rate,) = p or (1.0,)
            return np.full_like(x, rate)
        if name == "gamma":
            k, theta = p or (2.0, 1.0)
            return -(k - 1) / x + 1 / theta
        if name == "beta":
            a, b = p or (2.0, 2.0)
            return -(a - 1) / x + (b - 1) / (1 - x)
        if name == "uniform":
            return np.zeros_like(x)
        raise ValueError(f"no potential gradient for {name!r}")


def density(name: str, params=(), d: int = 1) -> DensityModel:
    return DensityModel(make_law(name, params), d)


def _gaussian_like(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(np.shape(x))


def mh_step(x, t: float, f: DensityModel, rng: np.random.Generator | None = None,
            w=None, u=None) -> np.ndarray:
    """One Metropolis-Hastings move with N(0, t^2 I) proposal; returns x + tW or x."""
    x = np.asarray(x, dtype=float)
    if t <= 0:
        raise ValueError("step size must be positive")
    lf0 = f.logpdf(x)
    if np.any(~np.isfinite(lf0)):
        raise ZeroDensityAtStart("target density vanishes at a starting point")
    w = _gaussian_like(x, rng) if w is None else np.asarray(w, dtype=float)
    prop = x + t * w
    log_ratio = f.logpdf(prop) - lf0
    u = rng.uniform(size=np.shape(lf0)) if u is None else np.asarray(u, dtype=float)
    accept = np.log(u) <= log_ratio
    if f.d > 1 and x.ndim > 1:
        accept = accept[..., None]
    return np.where(accept, prop, x)


def acceptance_defect(f: DensityModel, s: float, p: float, samples: int,
                      rng: np.random.Generator) -> float:
    """Monte Carlo E[ ||W||^p (1 - f(X + sW)/f(X))_+ ] with X ~ f, W ~ N(0, I)."""
    return float(acceptance_defect_curve(f, [s], p, samples, rng)[0])


def acceptance_defect_curve(f: DensityModel, s_grid, p: float, samples: int,
                            rng: np.random.Generator) -> np.ndarray:
    """Defect at several step sizes from one shared set of draws."""
    x = f.sample(rng, samples)
    w = rng.standard_normal(np.shape(x))
    norm_w = np.abs(w) if f.d == 1 else np.linalg.norm(w, axis=-1)
    lf0 = f.logpdf(x)
    out = []
    for s in s_grid:
        if s == 0:
            out.append(0.0)
            continue
        ratio = np.exp(np.minimum(f.logpdf(x + s * w) - lf0, 0.0))
        out.append(float(np.mean(norm_w**p * (1.0 - ratio))))
    return np.array(out)


def langevin_step(y, dt: float, steps: int, model: DensityModel,
                  rng: np.random.Generator) -> np.ndarray:
    """Euler-Maruyama for dY = -grad rho(Y) dt + sqrt(2) dB."""
    y = np.array(y, dtype=float)
    if dt <= 0:
        raise ValueError("dt must be positive")
    scale = np.sqrt(2.0 * dt)
    for _ in range(steps):
        y = y - model.grad_potential(y) * dt + scale * rng.standard_normal(y.shape)
    return y


def gradient_moment_ratios(model: DensityModel, rng: np.random.Generator, samples: int = 100_000,
                           orders=(2, 4, 6)) -> dict:
    """(E|grad rho(Y)|^k)^(1/k) / k for a few k; bounded growth is consistent with sub-Gamma tails.

    A diagnostic only; no pass/fail threshold is attached.
    """
    g = np.abs(model.grad_potential(model.sample(rng, samples)))
    return {k: float(np.mean(g**k) ** (1.0 / k) / k) for k in orders}
