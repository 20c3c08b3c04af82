"""Optimization on weighted complete graphs and the random assignment problem."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import OddVertexCount, SizeExceeded
from .euclidean import GraphSolution, held_karp, kruskal

MATCHING_CAP = 16
ASSIGNMENT_ENUM_CAP = 8
# |E(G)| / p for the built-in families, rounded up to 1 for trees
E_MAX = {"tour": 1.0, "mst": 1.0, "matching": 0.5}


@dataclass(frozen=True, eq=False)
class EdgeWeights:
    """Weights of K_p stored as a symmetric matrix with zero diagonal."""

    matrix: np.ndarray

    @property
    def p(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_vector(cls, p: int, values) -> "EdgeWeights":
        W = np.zeros((p, p))
        iu, ju = np.triu_indices(p, 1)
        W[iu, ju] = values
        W[ju, iu] = values
        return cls(W)

    def vector(self) -> np.ndarray:
        iu, ju = np.triu_indices(self.p, 1)
        return self.matrix[iu, ju]


def edge_index(p: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(p) for j in range(i + 1, p)]


def min_perfect_matching(W: np.ndarray) -> tuple[float, list[tuple[int, int]]]:
    """Bitmask DP: the lowest unmatched vertex is always paired first."""
    p = W.shape[0]
    if p % 2:
        raise OddVertexCount(f"perfect matching needs an even vertex count, got {p}")
    if p > MATCHING_CAP:
        raise SizeExceeded(f"matching DP is capped at p={MATCHING_CAP}")
    Wl = W.tolist()

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[float, int]:
        if mask == 0:
            return 0.0, -1
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        opt, arg = math.inf, -1
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            c = Wl[i][j] + best(rest & ~(1 << j))[0]
            if c < opt:
                opt, arg = c, j
        return opt, arg

    full = (1 << p) - 1
    cost = best(full)[0]
    pairs = []
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = best(mask)[1]
        pairs.append((i, j))
        mask &= ~((1 << i) | (1 << j))
    return cost, pairs


def perfect_matchings(p: int):
    """Yield every perfect matching of K_p as a list of pairs ((p-1)!! of them)."""
    def rec(rest):
        if not rest:
            yield []
            return
        i = rest[0]
        for k in range(1, len(rest)):
            j = rest[k]
            for tail in rec(rest[1:k] + rest[k + 1:]):
                yield [(i, j)] + tail

    yield from rec(list(range(p)))


def complete_graph_solve(ew: EdgeWeights, kind: str) -> GraphSolution:
    W = ew.matrix
    if kind == "mst":
        return kruskal(W)
    if kind == "matching":
        return GraphSolution.from_edges(min_perfect_matching(W)[1], "matching")
    if kind == "tour":
        return GraphSolution.from_order(held_karp(W)[1])
    raise ValueError(f"unknown graph family {kind!r}")


# --- assignment --------------------------------------------------------------

def hungarian(C: np.ndarray) -> tuple[float, np.ndarray]:
    """Kuhn-Munkres with potentials, O(n^3). Returns (cost, pi) with pi[i] = column of row i."""
    C = np.asarray(C, dtype=float)
    n = C.shape[0]
    INF = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    match = [0] * (n + 1)  # match[col] = row, 1-based, 0 = free
    way = [0] * (n + 1)
    c = C.tolist()
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta, j1 = INF, 0
            row = c[i0 - 1]
            ui0 = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta, j1 = minv[j], j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    pi = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        pi[match[j] - 1] = j - 1
    return float(C[np.arange(n), pi].sum()), pi


def assignment_solve(C: np.ndarray) -> np.ndarray:
    return hungarian(C)[1]


def assignment_brute_force(C: np.ndarray) -> tuple[float, np.ndarray]:
    """Exhaustive scan in lexicographic order; first minimum wins."""
    n = C.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    costs = C[np.arange(n)[None, :], perms].sum(axis=1)
    k = int(np.argmin(costs))
    return float(costs[k]), perms[k]


def perm_metric(p1, p2) -> float:
    p1, p2 = np.asarray(p1), np.asarray(p2)
    return float(np.mean(p1 != p2))


def parisi_mean(n: int) -> float:
    """Expected optimal assignment cost with Exp(1) costs."""
    return sum(1.0 / i**2 for i in range(1, n + 1))


# --- edge membership ---------------------------------------------------------

@dataclass
class EdgeMembership:
    kind: str
    p: int
    reps: int
    frequency: np.ndarray
    se: np.ndarray
    bound: float
    symmetric_value: float


def edge_membership_rate(kind: str, p: int, reps: int, rng: np.random.Generator,
                         law=None) -> EdgeMembership:
    """Monte Carlo P(e in optimal graph) for every edge against 2 e_max / (p - 1)."""
    iu, ju = np.triu_indices(p, 1)
    pos = {(int(i), int(j)): k for k, (i, j) in enumerate(zip(iu, ju))}
    counts = np.zeros(iu.size)
    for _ in range(reps):
        vals = law.sample(rng, iu.size) if law is not None else rng.uniform(size=iu.size)
        g = complete_graph_solve(EdgeWeights.from_vector(p, vals), kind)
        for e in g.edges:
            counts[pos[e]] += 1
    freq = counts / reps
    se = np.sqrt(np.maximum(freq * (1 - freq), 1e-300) / reps)
    n_edges = {"tour": p, "matching": p // 2, "mst": p - 1}[kind]
    return EdgeMembership(kind, p, reps, freq, se, 2 * E_MAX[kind] / (p - 1),
                          n_edges / iu.size)
