"""Branching random walk: Galton-Watson trees with i.i.d. edge displacements."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .errors import ExtinctTree, NoFiniteMGF, PopulationCap
from .laws import Law
from .solution import SolutionPoint

POPULATION_CAP = 1_000_000
MAX_SURVIVAL_ATTEMPTS = 10_000


@dataclass(frozen=True, eq=False)
class GWTree:
    """Vertices are numbered generation by generation; vertex 0 is the root.

    Every non-root vertex ``v`` is the child end of exactly one edge, so edges
    are indexed by their child vertex.
    """

    n: int
    parent: np.ndarray
    gen_start: np.ndarray  # gen_start[k]:gen_start[k+1] are the ids of D_k

    @property
    def size(self) -> int:
        return self.parent.size

    def generation(self, k: int) -> np.ndarray:
        return np.arange(self.gen_start[k], self.gen_start[k + 1])

    @property
    def leaves(self) -> np.ndarray:
        return self.generation(self.n)

    @property
    def survived(self) -> bool:
        return self.gen_start[self.n + 1] > self.gen_start[self.n]

    @property
    def edges(self) -> np.ndarray:
        return np.arange(1, self.size)

    def ancestors(self, v: int) -> list[int]:
        """Child ends of the edges on the root-to-v path."""
        path = []
        while v > 0:
            path.append(v)
            v = int(self.parent[v])
        return path


@dataclass(frozen=True, eq=False)
class DisplacedTree:
    tree: GWTree
    disp: np.ndarray  # disp[v] lives on the edge (parent[v], v); disp[0] = 0

    def positions(self) -> np.ndarray:
        return path_sums(self.tree, self.disp)


def sample_tree(progeny, n: int, rng: np.random.Generator, condition_on_survival: bool = True,
                cap: int = POPULATION_CAP) -> GWTree:
    pmf = np.asarray(progeny, dtype=float)
    pmf = pmf / pmf.sum()
    if float(np.dot(np.arange(pmf.size), pmf)) <= 1:
        raise ValueError("progeny law must be supercritical (mean > 1)")
    for _ in range(MAX_SURVIVAL_ATTEMPTS):
        parents = [np.array([-1])]
        starts = [0, 1]
        prev = np.array([0])
        nxt_id = 1
        for _k in range(n):
            counts = rng.choice(pmf.size, size=prev.size, p=pmf)
            kids = np.repeat(prev, counts)
            if kids.size > cap:
                raise PopulationCap(f"generation size {kids.size} exceeds cap {cap}")
            parents.append(kids)
            prev = np.arange(nxt_id, nxt_id + kids.size)
            nxt_id += kids.size
            starts.append(nxt_id)
        tree = GWTree(n, np.concatenate(parents), np.array(starts))
        if tree.survived or not condition_on_survival:
            return tree
    raise ExtinctTree(f"no surviving tree in {MAX_SURVIVAL_ATTEMPTS} attempts")


def path_sums(tree: GWTree, disp: np.ndarray) -> np.ndarray:
    S = np.zeros(tree.size)
    for k in range(1, tree.n + 1):
        ids = tree.generation(k)
        S[ids] = S[tree.parent[ids]] + disp[ids]
    return S


def sample_brw(progeny, law: Law, n: int, rng: np.random.Generator,
               condition_on_survival: bool = True) -> DisplacedTree:
    tree = sample_tree(progeny, n, rng, condition_on_survival)
    disp = np.zeros(tree.size)
    disp[1:] = law.sample(rng, tree.size - 1)
    return DisplacedTree(tree, disp)


def min_displacement(dt: DisplacedTree) -> tuple[float, SolutionPoint]:
    leaves = dt.tree.leaves
    if leaves.size == 0:
        raise ExtinctTree("generation n is empty")
    S = dt.positions()[leaves]
    k = int(np.argmin(S))
    return float(S[k]), SolutionPoint(int(leaves[k]), float(S[k]))


def brw_metric(v1: int, v2: int, tree: GWTree) -> float:
    """Graph distance between two generation-n vertices, divided by n."""
    steps = 0
    while v1 != v2:
        v1, v2 = int(tree.parent[v1]), int(tree.parent[v2])
        steps += 1
    return 2 * steps / tree.n


# --- velocity ----------------------------------------------------------------

def gaussian_log_mgf(mu: float = 0.0, sd: float = 1.0):
    """Lambda(s) = log E exp(-s X) and its derivative for X ~ N(mu, sd^2)."""
    return (lambda s: -mu * s + 0.5 * sd * sd * s * s,
            lambda s: -mu + sd * sd * s)


def quadrature_log_mgf(pdf: Callable[[float], float], lo: float, hi: float):
    """Lambda and Lambda' for a density supported on [lo, hi], by adaptive quadrature."""
    def moment(s, k):
        val, _ = integrate.quad(lambda x: x**k * pdf(x) * math.exp(-s * x), lo, hi,
                                epsabs=1e-14, epsrel=1e-12, limit=200)
        return val

    return (lambda s: math.log(moment(s, 0)),
            lambda s: -moment(s, 1) / moment(s, 0))


def log_mgf_for(law: Law):
    if law.name == "gaussian":
        return gaussian_log_mgf(*(law.params or (0.0, 1.0)))
    if law.name in ("uniform", "beta"):
        lo, hi = (law.params or (0.0, 1.0)) if law.name == "uniform" else (0.0, 1.0)
        return quadrature_log_mgf(lambda x: float(law.pdf(x)), lo, hi)
    raise NoFiniteMGF(f"no log-MGF available for law {law.name!r}")


def psi_star(m: float, log_mgf) -> tuple[float, float]:
    """Velocity constant inf_{s>0} (log m + Lambda(s)) / s and its minimiser s*.

    s* is the root of s Psi'(s) = Psi(s) with Psi = log m + Lambda.
    """
    lam, dlam = log_mgf

    def g(s):
        return s * dlam(s) - (math.log(m) + lam(s))

    lo, hi = 1e-8, 1.0
    if g(lo) >= 0:
        raise NoFiniteMGF("stationarity equation has no positive root (log m <= 0?)")
    while g(hi) <= 0:
        hi *= 2
        if hi > 1e6:
            raise NoFiniteMGF("no root of s Psi'(s) = Psi(s) below s = 1e6")
    s = optimize.brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return (math.log(m) + lam(s)) / s, s


def psi_star_residual(m: float, log_mgf, s: float) -> float:
    lam, dlam = log_mgf
    return abs(s * dlam(s) - (math.log(m) + lam(s)))
