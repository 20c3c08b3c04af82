"""Summaries, goodness-of-fit tests and the sub-Gamma maximal bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats as sps

from .errors import EmptyInput, TooFewSamples

QUANTILES = (0.1, 0.5, 0.9)


@dataclass(frozen=True)
class Summary:
    count: int
    mean: float
    se: float
    q10: float
    median: float
    q90: float
    min: float
    max: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def quantile(values, prob: float) -> float:
    """Type-1 (inverse empirical CDF) quantile."""
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise EmptyInput("quantile of empty input")
    k = max(int(math.ceil(prob * x.size)), 1)
    return float(x[k - 1])


def summarize(values) -> Summary:
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput("summarize needs at least one value")
    sd = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    q = [quantile(x, p) for p in QUANTILES]
    return Summary(int(x.size), float(np.mean(x)), sd / math.sqrt(x.size), *q,
                   float(x.min()), float(x.max()))


def kolmogorov_sf(t: float, terms: int = 100) -> float:
    """P(K > t) for the Kolmogorov distribution."""
    if t <= 0:
        return 1.0
    k = np.arange(1, terms + 1)
    if t < 1.0:
        # theta-function form of the CDF converges fast for small t
        cdf = math.sqrt(2 * math.pi) / t * np.sum(np.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8 * t * t)))
        return float(min(max(1.0 - cdf, 0.0), 1.0))
    s = 2.0 * np.sum((-1.0) ** (k - 1) * np.exp(-2.0 * k**2 * t**2))
    return float(min(max(s, 0.0), 1.0))


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov statistic with the asymptotic p-value."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size < 20 or b.size < 20:
        raise TooFewSamples("ks_two_sample needs at least 20 points per sample")
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    stat = float(np.max(np.abs(cdf_a - cdf_b)))
    en = math.sqrt(a.size * b.size / (a.size + b.size))
    # Stephens' small-sample correction of the argument
    p = kolmogorov_sf((en + 0.12 + 0.11 / en) * stat)
    return stat, p


def ks_one_sample(a, cdf: Callable[[np.ndarray], np.ndarray]) -> tuple[float, float]:
    x = np.sort(np.asarray(a, dtype=float))
    if x.size < 20:
        raise TooFewSamples("ks_one_sample needs at least 20 points")
    n = x.size
    f = cdf(x)
    stat = float(max(np.max(np.arange(1, n + 1) / n - f), np.max(f - np.arange(n) / n)))
    en = math.sqrt(n)
    return stat, kolmogorov_sf((en + 0.12 + 0.11 / en) * stat)


def chi_square_uniform(counts) -> tuple[float, float]:
    c = np.asarray(counts, dtype=float)
    k = c.size
    total = c.sum()
    if k < 2 or total < 5 * k:
        raise TooFewSamples(f"need at least {5 * k} observations over {k} cells")
    expected = total / k
    stat = float(np.sum((c - expected) ** 2) / expected)
    return stat, float(sps.chi2.sf(stat, k - 1))


@dataclass
class SubGammaReport:
    m: int
    estimate: float
    se: float
    bound: float
    passed: bool


def subgamma_max_bound(sigma2: float, c: float, m: int) -> float:
    lm = math.log(m)
    return math.sqrt(2 * sigma2 * lm) + c * lm


def subgamma_max_check(sampler: Callable[[np.random.Generator, tuple], np.ndarray],
                       sigma2: float, c: float, m: int, reps: int,
                       rng: np.random.Generator, mean: float = 0.0) -> SubGammaReport:
    """Monte Carlo E max_{i<=m}(X_i - EX_i) against sqrt(2 sigma2 log m) + c log m.

    ``sampler(rng, shape)`` draws i.i.d. copies; ``mean`` is their expectation.
    """
    draws = sampler(rng, (reps, m)) - mean
    maxima = draws.max(axis=1)
    est = float(maxima.mean())
    se = float(maxima.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    bound = subgamma_max_bound(sigma2, c, m)
    return SubGammaReport(m, est, se, bound, est <= bound + 3 * se)
