"""Euclidean TSP and MST with q-power edge weights.

Exact solvers (Held-Karp, Kruskal), brute-force enumerators used as oracles,
the edge-symmetric-difference metric and the "sister" constructions that move
a perturbed optimizer back onto the original point set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import SizeExceeded

KISSING = {1: 2, 2: 6, 3: 12, 4: 24}
TSP_CAP = 15
TOUR_ENUM_CAP = 10
TREE_ENUM_CAP = 8

Edge = tuple[int, int]


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    points: np.ndarray
    q: float = 1.0

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @cached_property
    def distances(self) -> np.ndarray:
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt(np.sum(diff * diff, axis=-1))

    @cached_property
    def weights(self) -> np.ndarray:
        return self.distances ** self.q

    def replace(self, i: int, point) -> "PointConfiguration":
        pts = self.points.copy()
        pts[i] = point
        return PointConfiguration(pts, self.q)


@dataclass(frozen=True)
class GraphSolution:
    edges: tuple[Edge, ...]
    kind: str = "tour"

    @classmethod
    def from_edges(cls, edges, kind: str = "tour") -> "GraphSolution":
        return cls(canonical_edges(edges), kind)

    @classmethod
    def from_order(cls, order) -> "GraphSolution":
        order = list(order)
        return cls.from_edges(zip(order, order[1:] + order[:1]), "tour")

    def degrees(self, n: int) -> np.ndarray:
        deg = np.zeros(n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {}
        for i, j in self.edges:
            adj.setdefault(i, []).append(j)
            adj.setdefault(j, []).append(i)
        return adj


def canonical_edges(edges) -> tuple[Edge, ...]:
    return tuple(sorted((min(i, j), max(i, j)) for i, j in edges))


def graph_weight(W: np.ndarray, g: GraphSolution) -> float:
    if not g.edges:
        return 0.0
    e = np.array(g.edges)
    return float(np.sum(W[e[:, 0], e[:, 1]]))


def sample_points(n: int, d: int, rng: np.random.Generator, law: str = "uniform",
                  q: float = 1.0) -> PointConfiguration:
    if law == "uniform":
        pts = rng.uniform(0.0, 1.0, (n, d))
    elif law == "gaussian":
        pts = rng.normal(0.0, 1.0, (n, d))
    else:
        raise ValueError(f"unsupported point law {law!r}")
    return PointConfiguration(pts, q)


# --- solvers -----------------------------------------------------------------

def held_karp(W: np.ndarray) -> tuple[float, list[int]]:
    """Exact minimum Hamiltonian cycle on a symmetric weight matrix.

    Bitmask DP over subsets of {1..n-1}, vectorised across all masks of one
    popcount at a time. Returns (cost, vertex order starting at 0).
    """
    n = W.shape[0]
    if n < 3:
        raise ValueError("a tour needs at least 3 vertices")
    if n > TSP_CAP:
        raise SizeExceeded(f"Held-Karp is capped at n={TSP_CAP}, got {n}")
    m = n - 1
    full = (1 << m) - 1
    dp = np.full((1 << m, m), np.inf)
    parent = np.full((1 << m, m), -1, dtype=np.int64)
    Wt = W[1:, 1:]
    for j in range(m):
        dp[1 << j, j] = W[0, j + 1]
    masks = np.arange(1 << m)
    popcount = np.array([bin(x).count("1") for x in range(1 << m)])
    for size in range(2, m + 1):
        layer = masks[popcount == size]
        for j in range(m):
            bit = 1 << j
            sel = layer[(layer & bit) != 0]
            prev = sel ^ bit
            cand = dp[prev] + Wt[:, j][None, :]
            k = np.argmin(cand, axis=1)
            dp[sel, j] = cand[np.arange(sel.size), k]
            parent[sel, j] = k
    closing = dp[full] + W[1:, 0]
    j = int(np.argmin(closing))
    cost = float(closing[j])
    order = []
    mask = full
    while j >= 0:
        order.append(j + 1)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    order.append(0)
    order.reverse()
    return cost, order


def tsp_solve(cfg: PointConfiguration) -> GraphSolution:
    _, order = held_karp(cfg.weights)
    return GraphSolution.from_order(order)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def kruskal(W: np.ndarray) -> GraphSolution:
    n = W.shape[0]
    iu, ju = np.triu_indices(n, 1)
    order = np.lexsort((ju, iu, W[iu, ju]))
    ds = _DisjointSet(n)
    edges = []
    for e in order:
        i, j = int(iu[e]), int(ju[e])
        if ds.union(i, j):
            edges.append((i, j))
            if len(edges) == n - 1:
                break
    return GraphSolution.from_edges(edges, "tree")


def mst_solve(cfg: PointConfiguration) -> GraphSolution:
    if cfg.n < 2:
        raise ValueError("MST needs at least 2 points")
    return kruskal(cfg.weights)


# --- enumeration oracles -----------------------------------------------------

def tour_orders(n: int) -> np.ndarray:
    """All (n-1)!/2 Hamiltonian cycles of K_n as vertex orders starting at 0."""
    if n > TOUR_ENUM_CAP:
        raise SizeExceeded(f"tour enumeration is capped at n={TOUR_ENUM_CAP}")
    rows = [(0,) + p for p in itertools.permutations(range(1, n)) if p[0] < p[-1]]
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def tour_lengths(W: np.ndarray, orders: np.ndarray) -> np.ndarray:
    nxt = np.roll(orders, -1, axis=1)
    return W[orders, nxt].sum(axis=1)


def _prufer_decode(seq, n: int) -> list[Edge]:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        for leaf in range(n):
            if degree[leaf] == 1:
                edges.append((leaf, v))
                degree[leaf] -= 1
                degree[v] -= 1
                break
    u, w = [i for i in range(n) if degree[i] == 1]
    edges.append((u, w))
    return edges


def spanning_trees(n: int) -> list[tuple[Edge, ...]]:
    """All n^(n-2) labelled spanning trees of K_n, via Pruefer sequences."""
    if n > TREE_ENUM_CAP:
        raise SizeExceeded(f"tree enumeration is capped at n={TREE_ENUM_CAP}")
    if n == 1:
        return [()]
    if n == 2:
        return [((0, 1),)]
    return [canonical_edges(_prufer_decode(seq, n))
            for seq in itertools.product(range(n), repeat=n - 2)]


def enumerate_solutions(cfg: PointConfiguration, kind: str) -> list[GraphSolution]:
    if kind == "tour":
        return [GraphSolution.from_order(o) for o in tour_orders(cfg.n)]
    if kind == "tree":
        return [GraphSolution(t, "tree") for t in spanning_trees(cfg.n)]
    raise ValueError(kind)


# --- metric and sisters ------------------------------------------------------

def graph_metric(g1: GraphSolution, g2: GraphSolution, n: int) -> float:
    return len(set(g1.edges) ^ set(g2.edges)) / n


def nearest_neighbor(cfg: PointConfiguration, i: int) -> int:
    d = cfg.distances[i].copy()
    d[i] = np.inf
    return int(np.argmin(d))  # first index on ties


def nn_min_distance(cfg: PointConfiguration, i: int) -> float:
    return float(cfg.distances[i, nearest_neighbor(cfg, i)])


def nn_min_distances(cfg: PointConfiguration) -> np.ndarray:
    d = cfg.distances.copy()
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def tsp_sister_tour(cfg: PointConfiguration, perturbed_cfg: PointConfiguration, l: int,
                    optimal_perturbed_tour: GraphSolution) -> GraphSolution:
    """Reinsert the original point l into the perturbed optimal tour.

    Bypass l, then splice it next to its nearest original neighbour k, on an
    edge (k, k1) that was already present in the perturbed tour.
    """
    n = cfg.n
    if n == 3:
        return GraphSolution.from_order([0, 1, 2])
    orig = optimal_perturbed_tour.adjacency()
    l1, l2 = sorted(orig[l])
    edges = set(optimal_perturbed_tour.edges)
    edges -= {tuple(sorted((l, l1))), tuple(sorted((l, l2)))}
    edges.add(tuple(sorted((l1, l2))))
    k = nearest_neighbor(cfg, l)
    modified = GraphSolution(canonical_edges(edges)).adjacency()
    # smallest admissible index when both neighbours qualify
    k1 = min(v for v in modified[k] if v in orig[k])
    edges.discard(tuple(sorted((k, k1))))
    edges |= {tuple(sorted((k, l))), tuple(sorted((k1, l)))}
    return GraphSolution.from_edges(edges, "tour")


def mst_sister_tree(cfg: PointConfiguration, perturbed_cfg: PointConfiguration, l: int,
                    optimal_perturbed_tree: GraphSolution) -> GraphSolution:
    """Detach l, chain its former neighbours in index order, attach l to its nearest neighbour."""
    nbrs = sorted(optimal_perturbed_tree.adjacency().get(l, []))
    edges = set(optimal_perturbed_tree.edges)
    edges -= {tuple(sorted((l, v))) for v in nbrs}
    edges |= {tuple(sorted((a, b))) for a, b in zip(nbrs, nbrs[1:])}
    edges.add(tuple(sorted((nearest_neighbor(cfg, l), l))))
    return GraphSolution.from_edges(edges, "tree")


def tsp_sister_excess_bound(cfg: PointConfiguration, l: int) -> float:
    return 2.0 * nn_min_distance(cfg, l)


def mst_sister_excess_bound(cfg: PointConfiguration, perturbed_cfg: PointConfiguration,
                            l: int, optimal_perturbed_tree: GraphSolution) -> float:
    q = cfg.q
    nbrs = optimal_perturbed_tree.adjacency().get(l, [])
    xl_new = perturbed_cfg.points[l]
    spokes = sum(np.linalg.norm(cfg.points[v] - xl_new) ** q for v in nbrs)
    return (2.0**q - 1.0) * spokes + nn_min_distance(cfg, l) ** q


def is_hamiltonian_cycle(g: GraphSolution, n: int) -> bool:
    if len(g.edges) != n or np.any(g.degrees(n) != 2):
        return False
    adj = g.adjacency()
    seen, prev, cur = {0}, -1, 0
    while True:
        a, b = adj[cur]
        nxt = b if a == prev else a
        if nxt == 0:
            break
        if nxt in seen:
            return False
        seen.add(nxt)
        prev, cur = cur, nxt
    return len(seen) == n


def is_spanning_tree(g: GraphSolution, n: int) -> bool:
    if len(g.edges) != n - 1:
        return False
    ds = _DisjointSet(n)
    return all(ds.union(i, j) for i, j in g.edges)
