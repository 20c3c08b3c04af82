"""Packing and covering numbers of finite metric spaces.

Clouds are small (tens to a few hundred points), so the exact routines work on
Python-int bitsets: bit ``j`` of a mask stands for point ``j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import SizeExceeded

# "distance <= delta" is decided with this absolute slack
DIST_TOL = 1e-12
EXACT_CAP = 64


@dataclass
class SolutionCloud:
    points: list
    dist: np.ndarray
    counts: np.ndarray = None  # how many blocks produced each point

    def __post_init__(self):
        self.dist = np.asarray(self.dist, dtype=float)
        if self.counts is None:
            self.counts = np.ones(len(self.points), dtype=int)
        else:
            self.counts = np.asarray(self.counts, dtype=int)

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_points(cls, items: Iterable[Any], metric: Callable[[Any, Any], float],
                    key: Callable[[Any], Hashable] | None = None) -> "SolutionCloud":
        """Deduplicate ``items`` by canonical key and tabulate pairwise distances."""
        key = key or (lambda p: p)
        index: dict[Hashable, int] = {}
        pts: list = []
        counts: list[int] = []
        for it in items:
            k = key(it)
            if k in index:
                counts[index[k]] += 1
            else:
                index[k] = len(pts)
                pts.append(it)
                counts.append(1)
        m = len(pts)
        dist = np.zeros((m, m))
        for i, j in combinations(range(m), 2):
            dist[i, j] = dist[j, i] = metric(pts[i], pts[j])
        return cls(pts, dist, np.array(counts, dtype=int))

    @classmethod
    def from_line(cls, xs: Sequence[float], counts: Sequence[int] | None = None) -> "SolutionCloud":
        x = np.asarray(xs, dtype=float)
        return cls(list(x), np.abs(x[:, None] - x[None, :]), counts)

    def check_metric(self, tol: float = 1e-9) -> bool:
        d = self.dist
        if d.shape != (len(self), len(self)):
            return False
        if np.any(np.abs(np.diag(d)) > 0) or np.any(d < 0) or not np.allclose(d, d.T, atol=0, rtol=0):
            return False
        # d[i,j] <= d[i,k] + d[k,j] for all k
        for k in range(len(self)):
            if np.any(d > d[:, [k]] + d[[k], :] + tol):
                return False
        return True

    def subset(self, keep: Sequence[int]) -> "SolutionCloud":
        keep = list(keep)
        return SolutionCloud([self.points[i] for i in keep], self.dist[np.ix_(keep, keep)],
                             self.counts[keep])


@dataclass
class CoverReport:
    ball_count: int
    centers: list[int]
    discarded: list[int]
    radius: float
    discard_budget: int
    covered_weight: int = 0
    total_weight: int = 0
    # exact min over admissible discard sets of the packing number, when affordable
    exact_packing: int | None = None
    extra: dict = field(default_factory=dict)


def _far_masks(cloud: SolutionCloud, delta: float) -> list[int]:
    """Bitmask per point of the points strictly farther than delta."""
    far = cloud.dist > delta + DIST_TOL
    masks = []
    for row in far:
        m = 0
        for j in np.flatnonzero(row):
            m |= 1 << int(j)
        masks.append(m)
    return masks


def _ball_masks(cloud: SolutionCloud, radius: float) -> list[int]:
    near = cloud.dist <= radius + DIST_TOL
    masks = []
    for row in near:
        m = 0
        for j in np.flatnonzero(row):
            m |= 1 << int(j)
        masks.append(m)
    return masks


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def packing_number_greedy(cloud: SolutionCloud, delta: float) -> int:
    chosen: list[int] = []
    for i in range(len(cloud)):
        if all(cloud.dist[i, j] > delta + DIST_TOL for j in chosen):
            chosen.append(i)
    return len(chosen)


def _color_bounds(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    # greedy sequential coloring; a clique uses at most one vertex per color
    order, bounds = [], []
    color = 0
    Q = P
    while Q:
        color += 1
        avail = Q
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~adj[v] & ~(1 << v)
            Q &= ~(1 << v)
            order.append(v)
            bounds.append(color)
    return order, bounds


def _max_clique(adj: list[int]) -> int:
    n = len(adj)
    best = 0

    def expand(P: int, size: int) -> None:
        nonlocal best
        order, bounds = _color_bounds(P, adj)
        for v, b in zip(reversed(order), reversed(bounds)):
            if size + b <= best:
                return
            newP = P & adj[v]
            if newP:
                expand(newP, size + 1)
            elif size + 1 > best:
                best = size + 1
            P &= ~(1 << v)

    if n:
        expand((1 << n) - 1, 0)
    return best


def packing_number_exact(cloud: SolutionCloud, delta: float, cap: int = EXACT_CAP) -> int:
    """Largest subset with all pairwise distances > delta.

    Maximum clique of the "strictly farther than delta" graph, by branch and
    bound with greedy-coloring bounds.
    """
    if len(cloud) > cap:
        raise SizeExceeded(f"cloud has {len(cloud)} points, exact cap is {cap}")
    return _max_clique(_far_masks(cloud, delta))


def _greedy_cover(balls: list[int], target: int, weights: Sequence[int] | None = None,
                  need: int | None = None) -> list[int]:
    """Greedy centers until the covered weight reaches ``need`` (default: all of target)."""
    if weights is None:
        weights = [1] * len(balls)

    def w(mask: int) -> int:
        return sum(weights[j] for j in _bits(mask))

    if need is None:
        need = w(target)
    covered, got, centers = 0, 0, []
    while got < need:
        best_c, best_gain = -1, 0
        for c, ball in enumerate(balls):
            gain = w(ball & target & ~covered)
            if gain > best_gain:
                best_c, best_gain = c, gain
        if best_c < 0:
            break
        centers.append(best_c)
        covered |= balls[best_c]
        got += best_gain
    return centers


def _min_cover(balls: list[int], full: int) -> int:
    best = len(_greedy_cover(balls, full))
    # union of all balls containing e: points that can share a ball with e
    co = [0] * len(balls)
    for c, ball in enumerate(balls):
        for e in _bits(ball):
            co[e] |= ball
    maxcov = max(bin(b).count("1") for b in balls)

    def lower(unc: int) -> int:
        cnt, avail = 0, unc
        while avail:
            e = (avail & -avail).bit_length() - 1
            cnt += 1
            avail &= ~co[e]
        return max(cnt, -(-bin(unc).count("1") // maxcov))

    def rec(unc: int, k: int) -> None:
        nonlocal best
        if not unc:
            best = min(best, k)
            return
        if k + lower(unc) >= best:
            return
        # branch on the uncovered point with the fewest candidate centers
        e = min(_bits(unc), key=lambda j: bin(balls[j]).count("1"))
        cands = sorted(_bits(balls[e]), key=lambda c: -bin(balls[c] & unc).count("1"))
        for c in cands:
            rec(unc & ~balls[c], k + 1)

    rec(full, 0)
    return best


def covering_number_internal(cloud: SolutionCloud, delta: float, cap: int = EXACT_CAP,
                             with_flag: bool = False):
    """Fewest closed delta-balls centred at cloud points covering the cloud.

    Above ``cap`` the greedy count is returned; ``with_flag=True`` returns
    ``(count, exact)`` so callers can tell the two apart.
    """
    n = len(cloud)
    if n == 0:
        return (0, True) if with_flag else 0
    balls = _ball_masks(cloud, delta)
    full = (1 << n) - 1
    if n > cap:
        val, exact = len(_greedy_cover(balls, full)), False
    else:
        val, exact = _min_cover(balls, full), True
    return (val, exact) if with_flag else val


def partial_cover_count(cloud: SolutionCloud, radius: float, discard_fraction: float,
                        exact_points: int = 12, exact_budget: int = 50_000) -> CoverReport:
    """Greedy count of radius-balls covering all but a fraction of the cloud weight.

    Weights are point multiplicities, i.e. the number of perturbation blocks
    whose optimizer is that point, so the discard fraction refers to blocks.
    """
    if not 0 <= discard_fraction < 1:
        raise ValueError("discard_fraction must lie in [0, 1)")
    n = len(cloud)
    weights = [int(c) for c in cloud.counts]
    total = sum(weights)
    if n == 0:
        return CoverReport(0, [], [], radius, 0, 0, 0, 0)
    need = math.ceil((1 - discard_fraction) * total - 1e-9)
    budget = total - need
    balls = _ball_masks(cloud, radius)
    full = (1 << n) - 1
    centers = _greedy_cover(balls, full, weights, need)
    covered = 0
    for c in centers:
        covered |= balls[c]
    discarded = [j for j in range(n) if not covered >> j & 1]
    report = CoverReport(len(centers), centers, discarded, radius, budget,
                         sum(weights[j] for j in _bits(covered)), total)

    if n <= exact_points and math.comb(n, min(budget, n)) <= exact_budget:
        best = None
        for mask in range(1 << n):
            if sum(weights[j] for j in _bits(mask)) > budget:
                continue
            keep = [j for j in range(n) if not mask >> j & 1]
            if not keep:
                continue
            p = packing_number_exact(cloud.subset(keep), radius)
            best = p if best is None else min(best, p)
        report.exact_packing = best
    return report
