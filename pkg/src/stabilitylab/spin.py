"""Sherrington-Kirkpatrick and Edwards-Anderson ground states.

States are gauged: the first spin (SK) or the spin at the origin (EA) is +1,
which picks one representative of each {sigma, -sigma} pair. Ground states
are found by a Gray-code scan of the 2^(n-1) gauged states, one spin flip and
an O(degree) energy update per step.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import SizeExceeded
from .solution import SolutionPoint

SPIN_CAP = 22


@dataclass(frozen=True, eq=False)
class LatticeBox:
    """Box of Z^d with ``shape[k]`` sites along axis k; site 0 is the origin."""

    shape: tuple[int, ...]
    sites: list = field(init=False)
    bonds: np.ndarray = field(init=False)

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        if not shape or min(shape) < 1:
            raise ValueError(f"bad lattice shape {self.shape}")
        sites = list(itertools.product(*(range(s) for s in shape)))
        index = {s: k for k, s in enumerate(sites)}
        bonds = []
        for k, s in enumerate(sites):
            for axis in range(len(shape)):
                t = list(s)
                t[axis] += 1
                j = index.get(tuple(t))
                if j is not None:
                    bonds.append((k, j))
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "bonds", np.array(bonds, dtype=np.int64).reshape(-1, 2))

    @property
    def d(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return len(self.sites)

    def is_connected(self) -> bool:
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.bonds:
            parent[find(int(i))] = find(int(j))
        return len({find(i) for i in range(self.size)}) == 1


def sk_bonds(n: int) -> np.ndarray:
    """Index set {(i, j): i < j} in lexicographic order, as an (k, 2) array."""
    iu, ju = np.triu_indices(n, 1)
    return np.stack([iu, ju], axis=1).astype(np.int64)


def sk_row_blocks(n: int) -> list[list[int]]:
    """Block i holds every bond touching spin i."""
    pairs = sk_bonds(n)
    return [list(np.flatnonzero((pairs[:, 0] == i) | (pairs[:, 1] == i))) for i in range(n)]


def energy(pairs: np.ndarray, couplings, sigma) -> float:
    s = np.asarray(sigma, dtype=float)
    J = np.asarray(couplings, dtype=float)
    return float(-np.sum(J * s[pairs[:, 0]] * s[pairs[:, 1]]))


def sk_energy(bonds, sigma) -> float:
    n = len(sigma)
    bonds = np.asarray(bonds, dtype=float)
    if bonds.size != n * (n - 1) // 2:
        raise ValueError(f"expected {n * (n - 1) // 2} bonds for n={n}, got {bonds.size}")
    return energy(sk_bonds(n), bonds, sigma)


def gauge(sigma, site: int = 0) -> tuple[int, ...]:
    s = np.asarray(sigma, dtype=np.int64)
    if s[site] < 0:
        s = -s
    return tuple(int(v) for v in s)


@numba.njit(cache=True)
def _gray_scan(n, indptr, nbr, coup, keep_all):
    m = n - 1
    count = 1 << m
    s = np.ones(n)
    h = np.zeros(n)
    e = 0.0
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            h[i] += coup[p]
            if nbr[p] > i:
                e -= coup[p]
    energies = np.empty(count if keep_all else 1)
    best, best_t = e, 0
    if keep_all:
        energies[0] = e
    for t in range(1, count):
        # bit flipped between gray(t-1) and gray(t) is the lowest set bit of t
        b = 0
        x = t
        while (x & 1) == 0:
            x >>= 1
            b += 1
        k = b + 1
        e += 2.0 * s[k] * h[k]
        sk = s[k]
        for p in range(indptr[k], indptr[k + 1]):
            h[nbr[p]] -= 2.0 * coup[p] * sk
        s[k] = -sk
        if keep_all:
            energies[t] = e
        if e < best:
            best, best_t = e, t
    return best, best_t, energies


def _csr(n: int, pairs: np.ndarray, couplings) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    J = np.asarray(couplings, dtype=float)
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    w = np.concatenate([J, J])
    order = np.argsort(src, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    return np.cumsum(indptr), dst[order].astype(np.int64), w[order]


def gray_state(t: int, n: int) -> tuple[int, ...]:
    g = t ^ (t >> 1)
    return (1,) + tuple(-1 if g >> b & 1 else 1 for b in range(n - 1))


def gray_states(ts: np.ndarray, n: int) -> np.ndarray:
    g = ts ^ (ts >> 1)
    bits = (g[:, None] >> np.arange(n - 1)[None, :]) & 1
    return np.concatenate([np.ones((len(ts), 1), dtype=np.int64), 1 - 2 * bits], axis=1)


def gray_energies(n: int, pairs: np.ndarray, couplings) -> np.ndarray:
    """Energy of every gauged state, indexed by Gray-code step t."""
    if n > SPIN_CAP:
        raise SizeExceeded(f"spin enumeration is capped at {SPIN_CAP} spins, got {n}")
    if n == 1:
        return np.array([0.0])
    indptr, nbr, coup = _csr(n, pairs, couplings)
    return _gray_scan(n, indptr, nbr, coup, True)[2]


def ground_state(n: int, pairs: np.ndarray, couplings) -> SolutionPoint:
    if n > SPIN_CAP:
        raise SizeExceeded(f"spin enumeration is capped at {SPIN_CAP} spins, got {n}")
    if n == 1:
        return SolutionPoint((1,), 0.0)
    indptr, nbr, coup = _csr(n, pairs, couplings)
    best, t, _ = _gray_scan(n, indptr, nbr, coup, False)
    sigma = gray_state(int(t), n)
    # report the energy recomputed from scratch, not the running sum
    return SolutionPoint(sigma, energy(pairs, couplings, sigma))


def sk_ground_state(bonds) -> SolutionPoint:
    bonds = np.asarray(bonds, dtype=float)
    n = int(round((1 + math.sqrt(1 + 8 * bonds.size)) / 2))
    return ground_state(n, sk_bonds(n), bonds)


def ea_ground_state(lattice: LatticeBox, bonds) -> SolutionPoint:
    return ground_state(lattice.size, lattice.bonds, bonds)


def naive_energies(n: int, pairs: np.ndarray, couplings) -> tuple[np.ndarray, np.ndarray]:
    """All gauged states in binary order and their energies, by dense algebra."""
    J = np.zeros((n, n))
    J[pairs[:, 0], pairs[:, 1]] = couplings
    J = J + J.T
    ts = np.arange(1 << (n - 1))
    bits = (ts[:, None] >> np.arange(n - 1)[None, :]) & 1
    S = np.concatenate([np.ones((ts.size, 1)), 1.0 - 2.0 * bits], axis=1)
    return S, -0.5 * np.einsum("ki,ij,kj->k", S, J, S)


def naive_ground_state(n: int, pairs: np.ndarray, couplings) -> SolutionPoint:
    S, E = naive_energies(n, pairs, couplings)
    k = int(np.argmin(E))
    return SolutionPoint(tuple(int(v) for v in S[k]), float(E[k]))


def spin_metric(s1, s2, family: str = "SK", lattice: LatticeBox | None = None) -> float:
    a = np.asarray(s1)
    b = np.asarray(s2)
    if a.shape != b.shape:
        raise ValueError("spin configurations differ in length")
    if family == "SK":
        return float(np.mean(a != b))
    if lattice is None:
        raise ValueError("EA metric needs the lattice")
    i, j = lattice.bonds[:, 0], lattice.bonds[:, 1]
    diff = a[i] * a[j] - b[i] * b[j]
    return math.sqrt(float(np.sum(diff * diff)) / lattice.size)


def sk_ground_energy_bound(n: int) -> float:
    """Lower bound -(sqrt(2 zeta^2 log|S|) + zeta_inf log|S|) with zeta^2 = n(n-1)/2, |S| = 2^(n-1)."""
    log_card = (n - 1) * math.log(2)
    return -(math.sqrt(2 * (n * (n - 1) / 2) * log_card) + log_card)
