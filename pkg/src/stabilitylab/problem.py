"""Random optimization problems, perturbation blocks and the stability statistic.

A problem instance names a family and its size parameters. The family
adapters below give every family the same surface: index set, objective,
exact solver, metric, enumeration of the whole parameter space (where it is
finite and small) and its natural perturbation blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Hashable, Sequence

import numpy as np

from . import brw as brw_mod
from . import euclidean as eu
from . import matrices as rm
from . import spin
from . import weighted as wg
from .errors import BlockOutOfRange, ContinuousSpace, SizeExceeded, ValidationError
from .laws import Law, make_law
from .metric import CoverReport, SolutionCloud, partial_cover_count
from .seeding import hash64, substream
from .solution import SolutionPoint

FAMILIES = ("TSP", "MST", "WeightedGraph", "Assignment", "SK", "EA", "BRW", "Wigner", "Wishart")
VARIANTS = ("single_block", "row_block")
DEFAULT_SUBSAMPLE = 64
BRW_MIN_ANCESTRAL = 8
# key separating the tree stream from the displacement stream of a BRW seed
_TREE_KEY = 0x7EE5


@dataclass(frozen=True)
class ProblemInstance:
    family: str
    n: int
    d: int = 2
    q: float = 1.0
    shape: tuple = ()
    alpha: float = 1.0
    progeny: tuple = (0.0, 0.0, 1.0)
    graph_kind: str = "tour"
    law: str | None = None
    law_params: tuple = ()
    rng_seed: int = 0
    tree_seed: int | None = None  # BRW: fix the tree across input draws

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        get_family(self.family).validate(self)

    @property
    def input_law(self) -> Law:
        name = self.law or get_family(self.family).default_law
        return make_law(name, self.law_params)

    @property
    def k(self) -> int:
        return len(index_set(self))


@dataclass(frozen=True, eq=False)
class InputVector:
    labels: tuple
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class PerturbationScheme:
    blocks: tuple  # tuple of tuples of positions into the index set
    variant: str = "single_block"

    @property
    def m(self) -> int:
        return len(self.blocks)

    def validate(self, k: int) -> None:
        covered = set()
        for b in self.blocks:
            if not b:
                raise ValidationError("empty perturbation block")
            covered.update(b)
        if covered != set(range(k)):
            raise ValidationError("perturbation blocks must cover the index set")


@dataclass
class NearOptimalSet:
    theta: float
    members: list
    exhaustive: bool
    optimum: float = math.nan


@dataclass(frozen=True)
class WindowRule:
    family: str
    variant: str = "single_block"
    c: float = 1.0


# --- family adapters ---------------------------------------------------------

class Family:
    name = ""
    default_law = "gaussian"
    variants = ("single_block",)

    def validate(self, inst: ProblemInstance) -> None:
        if inst.n < 1:
            raise ValidationError("n must be positive")

    def labels(self, inst) -> list:
        raise NotImplementedError

    def value_shape(self, inst) -> tuple:
        return ()

    def objective(self, inst, x: InputVector, enc) -> float:
        raise NotImplementedError

    def solve(self, inst, x: InputVector) -> SolutionPoint:
        raise NotImplementedError

    def distance(self, inst, a, b) -> float:
        raise NotImplementedError

    def enumerate(self, inst, x: InputVector) -> tuple[np.ndarray, Callable[[int], Hashable]]:
        """Objective of every solution, and a decoder from position to encoding."""
        raise ContinuousSpace(f"{self.name} has a continuous parameter space")

    def blocks(self, inst, variant: str) -> list[list[int]]:
        if variant != "single_block":
            raise ValidationError(f"{self.name} supports variants {self.variants}")
        return [[i] for i in range(len(self.labels(inst)))]

    def size(self, inst) -> int:
        """Normaliser of the metric (n or p)."""
        return inst.n


class _EuclideanFamily(Family):
    default_law = "uniform"
    kind = "tour"

    def validate(self, inst):
        if inst.d < 2:
            raise ValidationError("Euclidean families need d >= 2")
        if not 1 <= inst.q < inst.d:
            raise ValidationError(f"q must lie in [1, d), got q={inst.q}, d={inst.d}")
        if inst.law not in (None, "uniform", "gaussian"):
            raise ValidationError("points are drawn from 'uniform' (box) or 'gaussian'")

    def labels(self, inst):
        return list(range(inst.n))

    def value_shape(self, inst):
        return (inst.d,)

    def config(self, inst, x) -> eu.PointConfiguration:
        return eu.PointConfiguration(x.values, inst.q)

    def objective(self, inst, x, enc):
        return eu.graph_weight(self.config(inst, x).weights, eu.GraphSolution(enc, self.kind))

    def distance(self, inst, a, b):
        return len(set(a) ^ set(b)) / inst.n


class TSPFamily(_EuclideanFamily):
    name = "TSP"

    def validate(self, inst):
        super().validate(inst)
        if not 3 <= inst.n <= eu.TSP_CAP:
            raise ValidationError(f"TSP needs 3 <= n <= {eu.TSP_CAP} (Held-Karp cap), got {inst.n}")

    def solve(self, inst, x):
        cfg = self.config(inst, x)
        g = eu.tsp_solve(cfg)
        return SolutionPoint(g.edges, eu.graph_weight(cfg.weights, g))

    def enumerate(self, inst, x):
        orders = eu.tour_orders(inst.n)
        vals = eu.tour_lengths(self.config(inst, x).weights, orders)
        return vals, lambda i: eu.GraphSolution.from_order(orders[i].tolist()).edges


class MSTFamily(_EuclideanFamily):
    name = "MST"
    kind = "tree"

    def validate(self, inst):
        super().validate(inst)
        if not 2 <= inst.n <= 5000:
            raise ValidationError(f"MST needs 2 <= n <= 5000, got {inst.n}")

    def solve(self, inst, x):
        cfg = self.config(inst, x)
        g = eu.mst_solve(cfg)
        return SolutionPoint(g.edges, eu.graph_weight(cfg.weights, g))

    def enumerate(self, inst, x):
        trees = eu.spanning_trees(inst.n)
        W = self.config(inst, x).weights
        arr = np.array(trees, dtype=np.int64)
        vals = W[arr[:, :, 0], arr[:, :, 1]].sum(axis=1)
        return vals, lambda i: trees[i]


class WeightedGraphFamily(Family):
    name = "WeightedGraph"
    default_law = "uniform"
    variants = VARIANTS
    caps = {"tour": eu.TSP_CAP, "matching": wg.MATCHING_CAP, "mst": 2000}

    def validate(self, inst):
        if inst.graph_kind not in self.caps:
            raise ValidationError(f"graph_kind must be one of {sorted(self.caps)}")
        lo = 3 if inst.graph_kind == "tour" else 2
        if not lo <= inst.n <= self.caps[inst.graph_kind]:
            raise ValidationError(f"{inst.graph_kind} needs {lo} <= p <= {self.caps[inst.graph_kind]}")
        if inst.graph_kind == "matching" and inst.n % 2:
            raise ValidationError("matching needs an even vertex count")

    def labels(self, inst):
        return wg.edge_index(inst.n)

    def weights(self, inst, x):
        return wg.EdgeWeights.from_vector(inst.n, x.values).matrix

    def objective(self, inst, x, enc):
        return eu.graph_weight(self.weights(inst, x), eu.GraphSolution(enc))

    def solve(self, inst, x):
        W = self.weights(inst, x)
        g = wg.complete_graph_solve(wg.EdgeWeights(W), inst.graph_kind)
        return SolutionPoint(g.edges, eu.graph_weight(W, g))

    def distance(self, inst, a, b):
        return len(set(a) ^ set(b)) / inst.n

    def enumerate(self, inst, x):
        W = self.weights(inst, x)
        if inst.graph_kind == "tour":
            orders = eu.tour_orders(inst.n)
            return eu.tour_lengths(W, orders), lambda i: eu.GraphSolution.from_order(orders[i].tolist()).edges
        if inst.graph_kind == "mst":
            trees = eu.spanning_trees(inst.n)
        else:
            trees = [eu.canonical_edges(m) for m in wg.perfect_matchings(inst.n)]
        arr = np.array(trees, dtype=np.int64)
        return W[arr[:, :, 0], arr[:, :, 1]].sum(axis=1), lambda i: trees[i]

    def blocks(self, inst, variant):
        if variant == "row_block":
            lab = self.labels(inst)
            return [[k for k, e in enumerate(lab) if v in e] for v in range(inst.n)]
        return super().blocks(inst, variant)


class AssignmentFamily(Family):
    name = "Assignment"
    default_law = "exponential"
    variants = VARIANTS

    def validate(self, inst):
        if not 1 <= inst.n <= 500:
            raise ValidationError(f"assignment needs 1 <= n <= 500, got {inst.n}")

    def labels(self, inst):
        return [(i, j) for i in range(inst.n) for j in range(inst.n)]

    def cost(self, inst, x):
        return np.asarray(x.values, dtype=float).reshape(inst.n, inst.n)

    def objective(self, inst, x, enc):
        C = self.cost(inst, x)
        return float(C[np.arange(inst.n), np.asarray(enc)].sum())

    def solve(self, inst, x):
        cost, pi = wg.hungarian(self.cost(inst, x))
        return SolutionPoint(tuple(int(v) for v in pi), cost)

    def distance(self, inst, a, b):
        return wg.perm_metric(a, b)

    def enumerate(self, inst, x):
        import itertools

        if inst.n > wg.ASSIGNMENT_ENUM_CAP:
            raise SizeExceeded(f"permutation enumeration is capped at n={wg.ASSIGNMENT_ENUM_CAP}")
        perms = np.array(list(itertools.permutations(range(inst.n))), dtype=np.int64)
        C = self.cost(inst, x)
        vals = C[np.arange(inst.n)[None, :], perms].sum(axis=1)
        return vals, lambda i: tuple(int(v) for v in perms[i])

    def blocks(self, inst, variant):
        if variant == "row_block":
            return [list(range(i * inst.n, (i + 1) * inst.n)) for i in range(inst.n)]
        return super().blocks(inst, variant)


class SKFamily(Family):
    name = "SK"
    variants = VARIANTS

    def validate(self, inst):
        if not 2 <= inst.n <= spin.SPIN_CAP:
            raise ValidationError(f"SK needs 2 <= n <= {spin.SPIN_CAP}, got {inst.n}")

    def labels(self, inst):
        return [tuple(int(v) for v in p) for p in spin.sk_bonds(inst.n)]

    def pairs(self, inst):
        return spin.sk_bonds(inst.n)

    def nspins(self, inst):
        return inst.n

    def objective(self, inst, x, enc):
        return spin.energy(self.pairs(inst), x.values, enc)

    def solve(self, inst, x):
        return spin.ground_state(self.nspins(inst), self.pairs(inst), x.values)

    def distance(self, inst, a, b):
        return spin.spin_metric(a, b, "SK")

    def enumerate(self, inst, x):
        n = self.nspins(inst)
        E = spin.gray_energies(n, self.pairs(inst), x.values)
        return E, lambda t: spin.gray_state(int(t), n)

    def blocks(self, inst, variant):
        if variant == "row_block":
            pairs = self.pairs(inst)
            return [list(np.flatnonzero((pairs[:, 0] == i) | (pairs[:, 1] == i)))
                    for i in range(self.nspins(inst))]
        return super().blocks(inst, variant)


@lru_cache(maxsize=64)
def _lattice(shape: tuple) -> spin.LatticeBox:
    return spin.LatticeBox(shape)


class EAFamily(SKFamily):
    name = "EA"

    def validate(self, inst):
        if not inst.shape:
            raise ValidationError("EA needs a lattice shape, e.g. shape = 3x4")
        lat = _lattice(tuple(inst.shape))
        if lat.size > spin.SPIN_CAP:
            raise ValidationError(f"EA lattice has {lat.size} sites, cap is {spin.SPIN_CAP}")
        if lat.size < 2:
            raise ValidationError("EA lattice needs at least 2 sites")

    def lattice(self, inst):
        return _lattice(tuple(inst.shape))

    def labels(self, inst):
        return [tuple(int(v) for v in p) for p in self.lattice(inst).bonds]

    def pairs(self, inst):
        return self.lattice(inst).bonds

    def nspins(self, inst):
        return self.lattice(inst).size

    def size(self, inst):
        return self.lattice(inst).size

    def distance(self, inst, a, b):
        return spin.spin_metric(a, b, "EA", self.lattice(inst))


@lru_cache(maxsize=32)
def _brw_tree(progeny: tuple, n: int, seed: int) -> brw_mod.GWTree:
    return brw_mod.sample_tree(progeny, n, substream(seed, _TREE_KEY), condition_on_survival=True)


class BRWFamily(Family):
    name = "BRW"

    def validate(self, inst):
        if not 1 <= inst.n <= 40:
            raise ValidationError(f"BRW generations must lie in [1, 40], got {inst.n}")
        pmf = np.asarray(inst.progeny, dtype=float)
        if np.any(pmf < 0) or pmf.sum() <= 0 or np.dot(np.arange(pmf.size), pmf) / pmf.sum() <= 1:
            raise ValidationError("progeny law must be a supercritical pmf")
        mean = float(np.dot(np.arange(pmf.size), pmf) / pmf.sum())
        if mean**inst.n > brw_mod.POPULATION_CAP:
            raise ValidationError(f"expected generation size {mean:.3g}^{inst.n} exceeds the cap "
                                  f"{brw_mod.POPULATION_CAP}")

    def tree(self, inst) -> brw_mod.GWTree:
        seed = inst.rng_seed if inst.tree_seed is None else inst.tree_seed
        return _brw_tree(tuple(float(v) for v in inst.progeny), inst.n, int(seed))

    def labels(self, inst):
        return list(range(1, self.tree(inst).size))

    def positions(self, inst, x):
        tree = self.tree(inst)
        disp = np.zeros(tree.size)
        disp[1:] = x.values
        return brw_mod.path_sums(tree, disp)

    def objective(self, inst, x, enc):
        return float(self.positions(inst, x)[enc])

    def solve(self, inst, x):
        tree = self.tree(inst)
        disp = np.zeros(tree.size)
        disp[1:] = x.values
        return brw_mod.min_displacement(brw_mod.DisplacedTree(tree, disp))[1]

    def distance(self, inst, a, b):
        return brw_mod.brw_metric(a, b, self.tree(inst))

    def enumerate(self, inst, x):
        leaves = self.tree(inst).leaves
        return self.positions(inst, x)[leaves], lambda i: int(leaves[i])


class WignerFamily(Family):
    name = "Wigner"
    variants = VARIANTS

    def validate(self, inst):
        if not 2 <= inst.n <= rm.EIGEN_CAP:
            raise ValidationError(f"Wigner needs 2 <= n <= {rm.EIGEN_CAP}")

    def labels(self, inst):
        return [(i, j) for i in range(inst.n) for j in range(i, inst.n)]

    def matrix(self, inst, x):
        iu, ju = np.triu_indices(inst.n)
        A = np.zeros((inst.n, inst.n))
        A[iu, ju] = x.values
        A[ju, iu] = x.values
        return A

    def objective(self, inst, x, enc):
        v = np.asarray(enc)
        return float(v @ self.matrix(inst, x) @ v)

    def solve(self, inst, x):
        ep = rm.extreme_eigenpair(self.matrix(inst, x), "wigner_min")
        return SolutionPoint(tuple(float(c) for c in ep.vector), ep.value)

    def distance(self, inst, a, b):
        return rm.vector_metric(a, b)

    def blocks(self, inst, variant):
        if variant == "row_block":
            lab = self.labels(inst)
            return [[k for k, (i, j) in enumerate(lab) if r in (i, j)] for r in range(inst.n)]
        return super().blocks(inst, variant)


class WishartFamily(WignerFamily):
    name = "Wishart"

    def validate(self, inst):
        if inst.alpha < 1:
            raise ValidationError("aspect ratio alpha = m/n must be >= 1")
        if not 1 <= inst.n <= rm.EIGEN_CAP:
            raise ValidationError(f"Wishart needs 1 <= n <= {rm.EIGEN_CAP}")

    def rows(self, inst):
        return max(int(round(inst.alpha * inst.n)), 1)

    def labels(self, inst):
        return [(i, j) for i in range(self.rows(inst)) for j in range(inst.n)]

    def matrix(self, inst, x):
        return np.asarray(x.values, dtype=float).reshape(self.rows(inst), inst.n)

    def objective(self, inst, x, enc):
        v = np.asarray(enc)
        Mv = self.matrix(inst, x) @ v
        return -float(Mv @ Mv)

    def solve(self, inst, x):
        ep = rm.extreme_eigenpair(self.matrix(inst, x), "wishart_max")
        return SolutionPoint(tuple(float(c) for c in ep.vector), -ep.value)

    def blocks(self, inst, variant):
        if variant == "row_block":
            # column i of M: every entry multiplying v_i
            m = self.rows(inst)
            return [[r * inst.n + i for r in range(m)] for i in range(inst.n)]
        return Family.blocks(self, inst, variant)


_FAMILIES = {f.name: f for f in (TSPFamily(), MSTFamily(), WeightedGraphFamily(), AssignmentFamily(),
                                 SKFamily(), EAFamily(), BRWFamily(), WignerFamily(), WishartFamily())}


def get_family(name: str) -> Family:
    try:
        return _FAMILIES[name]
    except KeyError:
        raise ValidationError(f"unknown family {name!r}") from None


# --- operations --------------------------------------------------------------

def index_set(inst: ProblemInstance) -> list:
    return get_family(inst.family).labels(inst)


def draw_values(inst: ProblemInstance, rng: np.random.Generator) -> InputVector:
    fam = get_family(inst.family)
    labels = tuple(fam.labels(inst))
    if isinstance(fam, _EuclideanFamily):
        pts = eu.sample_points(inst.n, inst.d, rng, inst.law or "uniform", inst.q).points
        return InputVector(labels, pts)
    return InputVector(labels, inst.input_law.sample(rng, (len(labels),) + fam.value_shape(inst)))


def sample_inputs(inst: ProblemInstance) -> InputVector:
    """I.i.d. inputs indexed by the family's index set, determined by ``inst.rng_seed``."""
    return draw_values(inst, substream(inst.rng_seed))


def perturbation_scheme(inst: ProblemInstance, variant: str = "single_block") -> PerturbationScheme:
    fam = get_family(inst.family)
    if variant not in fam.variants:
        raise ValidationError(f"{inst.family} supports variants {fam.variants}, not {variant!r}")
    return PerturbationScheme(tuple(tuple(int(i) for i in b) for b in fam.blocks(inst, variant)), variant)


def perturb_inputs(x: InputVector, scheme: PerturbationScheme, l: int, fresh: InputVector) -> InputVector:
    if not 0 <= l < scheme.m:
        raise BlockOutOfRange(f"block {l} not in [0, {scheme.m})")
    if len(fresh) != len(x):
        raise ValueError("fresh copy has the wrong length")
    vals = np.array(x.values, copy=True)
    block = list(scheme.blocks[l])
    vals[block] = fresh.values[block]
    return InputVector(x.labels, vals)


def objective(inst: ProblemInstance, x: InputVector, enc) -> float:
    return get_family(inst.family).objective(inst, x, enc)


def solve(inst: ProblemInstance, x: InputVector) -> SolutionPoint:
    return get_family(inst.family).solve(inst, x)


def distance(inst: ProblemInstance, a, b) -> float:
    return get_family(inst.family).distance(inst, a, b)


def _tolerance(opt: float) -> float:
    return 1e-12 * (1.0 + abs(opt))


def near_optimal_set(inst: ProblemInstance, x: InputVector, theta: float) -> NearOptimalSet:
    """Every solution within theta of the optimum, by exhaustive enumeration."""
    fam = get_family(inst.family)
    vals, decode = fam.enumerate(inst, x)
    opt = float(np.min(vals))
    idx = np.flatnonzero(vals <= opt + theta + _tolerance(opt))
    idx = idx[np.argsort(vals[idx], kind="stable")]
    members = [SolutionPoint(decode(int(i)), float(vals[i])) for i in idx]
    return NearOptimalSet(theta, members, True, opt)


def window_length(rule: WindowRule, n: float, d: int = 2, q: float = 1.0) -> float:
    """c times the largest window at which the near-optimal set stays tight."""
    if n < 2:
        raise ValueError("window length needs n >= 2")
    fam, var = rule.family, rule.variant
    if fam in ("TSP", "MST"):
        rate = n ** (-q / d)
    elif fam in ("WeightedGraph", "Assignment"):
        rate = 1.0 / n
    elif fam == "SK":
        rate = math.sqrt(n) if var == "row_block" else 1.0
    elif fam in ("EA", "BRW", "Wishart"):
        rate = 1.0
    elif fam == "Wigner":
        rate = n ** -0.5
    else:
        raise ValidationError(f"no window rule for {fam!r}")
    return rule.c * rate


def cloud_from_solutions(inst: ProblemInstance, sols: Sequence[SolutionPoint]) -> SolutionCloud:
    fam = get_family(inst.family)
    return SolutionCloud.from_points(sols, lambda a, b: fam.distance(inst, a.encoding, b.encoding),
                                     key=lambda s: s.encoding)


def _select_blocks(inst, x, scheme, block_subsample, rng) -> list[int]:
    m = scheme.m
    if block_subsample is None or block_subsample >= m:
        return list(range(m))
    if inst.family == "BRW":
        # make sure edges on the optimal path are among the perturbed ones
        fam = get_family("BRW")
        leaf = fam.solve(inst, x).encoding
        ancestral = [v - 1 for v in fam.tree(inst).ancestors(leaf)]
        take = min(BRW_MIN_ANCESTRAL, len(ancestral), block_subsample)
        chosen = set(rng.choice(ancestral, size=take, replace=False).tolist())
        rest = np.array([l for l in range(m) if l not in chosen]) if m < 200_000 else None
        while len(chosen) < block_subsample:
            if rest is not None:
                extra = rng.choice(rest, size=block_subsample - len(chosen), replace=False)
                chosen.update(int(v) for v in extra)
            else:
                chosen.add(int(rng.integers(m)))
        return sorted(chosen)
    return sorted(rng.choice(m, size=block_subsample, replace=False).tolist())


@dataclass
class PerturbedRun:
    blocks: list
    optimizers: list
    cloud: SolutionCloud
    # psi(x; optimizer of block l) - psi_opt(x), one entry per block
    excess: np.ndarray
    optimum: SolutionPoint


def perturbed_run(inst: ProblemInstance, x: InputVector, scheme: PerturbationScheme,
                  block_subsample: int | None = None, seed: int | None = None,
                  fresh: Callable[[int], InputVector] | None = None) -> PerturbedRun:
    """Solve every selected perturbed input.

    The fresh copy for block l is drawn from ``substream(*seed, l)``, where
    ``seed`` is an integer or a tuple of integer keys.
    """
    keys = (inst.rng_seed, 0xF5E5) if seed is None else (seed if isinstance(seed, tuple) else (seed,))
    if block_subsample is not None and block_subsample > scheme.m:
        raise ValidationError(f"block_subsample {block_subsample} exceeds m = {scheme.m}")
    chosen = _select_blocks(inst, x, scheme, block_subsample, substream(*keys, 0x5E1EC7))
    fam = get_family(inst.family)
    base = fam.solve(inst, x)
    sols, excess = [], []
    for l in chosen:
        fresh_l = fresh(l) if fresh is not None else draw_values(inst, substream(*keys, l))
        xl = perturb_inputs(x, scheme, l, fresh_l)
        s = fam.solve(inst, xl)
        sols.append(s)
        excess.append(fam.objective(inst, x, s.encoding) - base.objective_value)
    return PerturbedRun(chosen, sols, cloud_from_solutions(inst, sols), np.array(excess), base)


def perturbed_optimizers(inst: ProblemInstance, x: InputVector, scheme: PerturbationScheme,
                         block_subsample: int | None = None, seed: int | None = None) -> SolutionCloud:
    return perturbed_run(inst, x, scheme, block_subsample, seed).cloud


def stability_statistic(inst: ProblemInstance, x: InputVector, scheme: PerturbationScheme,
                        epsilon: float, block_subsample: int | None = None,
                        seed: int | None = None, run: PerturbedRun | None = None) -> CoverReport:
    """Balls of radius epsilon covering the optimizer cloud after discarding an epsilon fraction of blocks."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    run = run or perturbed_run(inst, x, scheme, block_subsample, seed)
    report = partial_cover_count(run.cloud, epsilon, epsilon)
    report.extra.update(cloud_size=len(run.cloud), blocks=len(run.blocks),
                        mean_excess=float(np.mean(run.excess)) if run.excess.size else 0.0)
    return report
