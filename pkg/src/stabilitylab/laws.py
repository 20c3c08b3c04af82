"""Registry of input laws with densities.

Every law used for inputs has a Lebesgue density, so optimizers are almost
surely unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import UnsupportedLaw


@dataclass(frozen=True)
class Law:
    name: str
    params: tuple = ()

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        p = self.params
        if self.name == "uniform":
            lo, hi = p or (0.0, 1.0)
            return rng.uniform(lo, hi, size)
        if self.name == "gaussian":
            mu, sd = p or (0.0, 1.0)
            return rng.normal(mu, sd, size)
        if self.name == "exponential":
            (rate,) = p or (1.0,)
            return rng.exponential(1.0 / rate, size)
        if self.name == "gamma":
            k, theta = p or (2.0, 1.0)
            return rng.gamma(k, theta, size)
        if self.name == "beta":
            a, b = p or (2.0, 2.0)
            return rng.beta(a, b, size)
        raise UnsupportedLaw(self.name)

    def mean(self) -> float:
        p = self.params
        if self.name == "uniform":
            lo, hi = p or (0.0, 1.0)
            return (lo + hi) / 2
        if self.name == "gaussian":
            return (p or (0.0, 1.0))[0]
        if self.name == "exponential":
            return 1.0 / (p or (1.0,))[0]
        if self.name == "gamma":
            k, theta = p or (2.0, 1.0)
            return k * theta
        if self.name == "beta":
            a, b = p or (2.0, 2.0)
            return a / (a + b)
        raise UnsupportedLaw(self.name)

    def logpdf(self, x) -> np.ndarray:
        """Coordinatewise log-density (sum over the last axis for vectors)."""
        x = np.asarray(x, dtype=float)
        p = self.params
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.name == "uniform":
                lo, hi = p or (0.0, 1.0)
                out = np.where((x >= lo) & (x <= hi), -math.log(hi - lo), -np.inf)
            elif self.name == "gaussian":
                mu, sd = p or (0.0, 1.0)
                out = -0.5 * ((x - mu) / sd) ** 2 - math.log(sd * math.sqrt(2 * math.pi))
            elif self.name == "exponential":
                (rate,) = p or (1.0,)
                out = np.where(x >= 0, math.log(rate) - rate * x, -np.inf)
            elif self.name == "gamma":
                k, theta = p or (2.0, 1.0)
                out = np.where(x > 0, (k - 1) * np.log(np.where(x > 0, x, 1.0)) - x / theta
                               - special.gammaln(k) - k * math.log(theta), -np.inf)
            elif self.name == "beta":
                a, b = p or (2.0, 2.0)
                inside = (x > 0) & (x < 1)
                xs = np.where(inside, x, 0.5)
                out = np.where(inside, (a - 1) * np.log(xs) + (b - 1) * np.log1p(-xs)
                               - special.betaln(a, b), -np.inf)
            else:
                raise UnsupportedLaw(self.name)
        return out

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def cdf(self, x) -> np.ndarray:
        from scipy import stats as sps

        p = self.params
        if self.name == "uniform":
            lo, hi = p or (0.0, 1.0)
            return sps.uniform.cdf(x, lo, hi - lo)
        if self.name == "gaussian":
            mu, sd = p or (0.0, 1.0)
            return sps.norm.cdf(x, mu, sd)
        if self.name == "exponential":
            return sps.expon.cdf(x, scale=1.0 / (p or (1.0,))[0])
        if self.name == "gamma":
            k, theta = p or (2.0, 1.0)
            return sps.gamma.cdf(x, k, scale=theta)
        if self.name == "beta":
            a, b = p or (2.0, 2.0)
            return sps.beta.cdf(x, a, b)
        raise UnsupportedLaw(self.name)


LAW_NAMES = ("uniform", "gaussian", "exponential", "gamma", "beta")


def make_law(name: str, params=()) -> Law:
    if name not in LAW_NAMES:
        raise UnsupportedLaw(f"unknown law {name!r}; choose from {', '.join(LAW_NAMES)}")
    return Law(name, tuple(float(v) for v in params))
