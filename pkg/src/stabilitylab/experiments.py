"""Experiment runner for the four experiment kinds, and result output.

Replication r draws everything from ``hash64(seed, r)``; the fresh copy for
block l of replication r comes from the stream keyed ``(seed, r, l)``. Rows are
sorted before output, so the worker count never changes the bytes written.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import brw as brw_mod
from . import euclidean as eu
from . import matrices as rm
from . import spin
from . import weighted as wg
from .config import ExperimentSpec
from .errors import StabilityLabError
from .laws import make_law
from .metric import EXACT_CAP, packing_number_exact, packing_number_greedy
from .problem import (WindowRule, cloud_from_solutions, get_family, near_optimal_set, perturbation_scheme,
                      perturbed_run, sample_inputs, stability_statistic, window_length)
from .seeding import hash64, substream
from .stats import quantile, summarize

COLUMNS = ("kind", "family", "n", "d", "q", "variant", "epsilon", "theta", "replication", "seed",
           "statistic_name", "value", "runtime_ms")
# packing numbers of near-optimal sets are computed exactly up to this many members
TIGHTNESS_EXACT_CAP = 400


@dataclass
class ExperimentRecord:
    spec: ExperimentSpec
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def values(self, statistic: str, **where) -> np.ndarray:
        out = [r["value"] for r in self.rows if r["statistic_name"] == statistic
               and all(r[k] == v for k, v in where.items())]
        return np.array(out, dtype=float)

    def summary(self) -> list[dict]:
        cells: dict = {}
        for r in self.rows:
            if r["statistic_name"] == "failed":
                continue
            key = (r["family"], r["n"], r["variant"], r["epsilon"], r["theta"], r["statistic_name"])
            cells.setdefault(key, []).append(r["value"])
        out = []
        for key in sorted(cells, key=_sort_key):
            fam, n, variant, eps, theta, name = key
            vals = [v for v in cells[key] if not math.isnan(v)]
            entry = dict(family=fam, n=n, variant=variant, epsilon=eps, theta=theta, statistic_name=name)
            entry.update(summarize(vals).as_dict() if vals else dict(count=0))
            out.append(entry)
        return out

    def growth(self, statistic: str = "packing_number", prob: float = 0.9) -> list[dict]:
        """Largest ratio q(n_j) / q(n_i), i < j, of the prob-quantile across the size grid, per (epsilon, c)."""
        out = []
        for eps in self.spec.epsilon:
            for c in self.spec.c:
                qs = []
                for n, _shape in self.spec.sizes():
                    theta = _theta(self.spec, c, n)
                    vals = self.values(statistic, n=n, epsilon=eps, theta=theta)
                    vals = vals[~np.isnan(vals)]
                    qs.append(quantile(vals, prob) if vals.size else math.nan)
                ratio = max((qs[j] / qs[i] for i in range(len(qs)) for j in range(i + 1, len(qs))), default=1.0)
                out.append(dict(epsilon=eps, c=c, n=[n for n, _ in self.spec.sizes()], quantiles=qs,
                                max_growth=ratio))
        return out


def _sort_key(key):
    return tuple((0, v) if isinstance(v, (int, float)) else (1, str(v)) for v in key)


def _theta(spec: ExperimentSpec, c: float, n: int) -> float:
    return window_length(WindowRule(spec.family, spec.variant, c), n, spec.d, spec.q)


def law_scale(law) -> float:
    """Standard deviation of a registered law (used to scale calibration anchors)."""
    p = law.params
    if law.name == "gaussian":
        return (p or (0.0, 1.0))[1]
    if law.name == "uniform":
        lo, hi = p or (0.0, 1.0)
        return (hi - lo) / math.sqrt(12)
    if law.name == "exponential":
        return 1.0 / (p or (1.0,))[0]
    if law.name == "gamma":
        k, theta = p or (2.0, 1.0)
        return math.sqrt(k) * theta
    a, b = p or (2.0, 2.0)
    return math.sqrt(a * b / ((a + b) ** 2 * (a + b + 1)))


def calibration_anchor(spec: ExperimentSpec, n: int) -> float:
    """Closed-form limit the calibrated statistic is compared to (nan when none applies)."""
    fam = spec.family
    if fam == "Assignment" and (spec.law or "exponential") == "exponential" and not spec.law_params:
        return wg.parisi_mean(n)
    inst_law = spec.instance(*spec.sizes()[0]).input_law
    if fam == "Wigner":
        return -2.0 * law_scale(inst_law)
    if fam == "Wishart":
        return law_scale(inst_law) ** 2 * (1 + math.sqrt(spec.alpha)) ** 2
    if fam == "BRW":
        pmf = np.asarray(spec.progeny, dtype=float)
        m = float(np.dot(np.arange(pmf.size), pmf / pmf.sum()))
        try:
            return -brw_mod.psi_star(m, brw_mod.log_mgf_for(inst_law))[0]
        except StabilityLabError:
            return math.nan
    return math.nan


# --- per-replication pipelines -------------------------------------------------

def _calibrate(spec, n, shape, r, seed):
    inst = spec.instance(n, shape, rng_seed=seed)
    fam = spec.family
    if fam == "Wigner":
        A = rm.sample_wigner(n, inst.input_law, substream(seed))
        return [("lambda_min_scaled", rm.extreme_eigenpair(A, "wigner_min").value / math.sqrt(n))]
    if fam == "Wishart":
        m = max(int(round(spec.alpha * n)), 1)
        M = rm.sample_wishart(m, n, inst.input_law, substream(seed))
        return [("lambda_max_scaled", rm.extreme_eigenpair(M, "wishart_max").value / n)]
    if fam == "BRW":
        dt = brw_mod.sample_brw(spec.progeny, inst.input_law, n, substream(seed))
        return [("min_position_scaled", brw_mod.min_displacement(dt)[0] / n)]
    if fam in ("TSP", "MST"):
        cfg = eu.sample_points(n, spec.d, substream(seed), spec.law or "uniform", spec.q)
        g = eu.tsp_solve(cfg) if fam == "TSP" else eu.mst_solve(cfg)
        val = eu.graph_weight(cfg.weights, g)
        return [("optimum", val), ("optimum_scaled", val / n ** ((spec.d - spec.q) / spec.d)),
                ("nn_scaled", n ** (1 / spec.d) * float(np.mean(eu.nn_min_distances(cfg))))]
    x = sample_inputs(inst)
    sol = get_family(fam).solve(inst, x)
    rows = [("optimum", sol.objective_value)]
    if fam == "SK":
        rows.append(("optimum_scaled", sol.objective_value / n**1.5))
        rows.append(("bound_slack", sol.objective_value - spin.sk_ground_energy_bound(n)))
    elif fam == "EA":
        rows.append(("optimum_scaled", sol.objective_value / n))
    return rows


def _stability(spec, n, shape, r, seed):
    inst = spec.instance(n, shape, rng_seed=seed)
    x = sample_inputs(inst)
    scheme = perturbation_scheme(inst, spec.variant)
    sub = spec.block_subsample
    if sub is None and scheme.m > 4 * 64 and inst.family in ("BRW", "Wigner", "Wishart"):
        sub = 64
    run = perturbed_run(inst, x, scheme, sub, seed=(spec.seed, r))
    theta = _theta(spec, spec.c[0], n)
    out = []
    for eps in spec.epsilon:
        rep = stability_statistic(inst, x, scheme, eps, run=run)
        cells = [("ball_count", rep.ball_count), ("cloud_size", len(run.cloud)),
                 ("blocks_used", len(run.blocks))]
        if rep.exact_packing is not None:
            cells.append(("exact_packing", rep.exact_packing))
        cells.append(("excess_ratio", float(np.mean(run.excess)) / theta))
        out += [(name, val, eps, theta) for name, val in cells]
    return out


def _tightness(spec, n, shape, r, seed):
    inst = spec.instance(n, shape, rng_seed=seed)
    x = sample_inputs(inst)
    out = []
    for c in spec.c:
        theta = _theta(spec, c, n)
        nos = near_optimal_set(inst, x, theta)
        cloud = cloud_from_solutions(inst, nos.members)
        for eps in spec.epsilon:
            if len(cloud) <= TIGHTNESS_EXACT_CAP:
                p, exact = packing_number_exact(cloud, eps, cap=TIGHTNESS_EXACT_CAP), 1
            else:
                p, exact = packing_number_greedy(cloud, eps), 0
            out += [("near_optimal_size", len(nos.members), eps, theta),
                    ("packing_number", p, eps, theta), ("packing_exact", exact, eps, theta)]
    return out


ORACLE_FAMILIES = ("TSP", "MST", "WeightedGraph", "Assignment", "SK", "EA", "BRW", "Wigner", "Wishart")
ORACLE_SIZES = {"TSP": 8, "MST": 7, "WeightedGraph": 10, "Assignment": 7, "SK": 10, "EA": 10, "BRW": 8,
                "Wigner": 12, "Wishart": 10}


def _close(a, b):
    return abs(a - b) <= 1e-9 * (1 + abs(a) + abs(b))


def oracle_mismatch(family: str, n: int, rng: np.random.Generator) -> int:
    """1 if the fast solver and a brute-force oracle disagree on one random instance."""
    if family == "TSP":
        cfg = eu.sample_points(n, 2, rng)
        g = eu.tsp_solve(cfg)
        L = eu.tour_lengths(cfg.weights, eu.tour_orders(n))
        return int(not _close(eu.graph_weight(cfg.weights, g), L.min()) or not eu.is_hamiltonian_cycle(g, n))
    if family == "MST":
        cfg = eu.sample_points(n, 2, rng)
        g = eu.mst_solve(cfg)
        best = min(eu.graph_weight(cfg.weights, eu.GraphSolution(t)) for t in eu.spanning_trees(n))
        return int(not _close(eu.graph_weight(cfg.weights, g), best))
    if family == "WeightedGraph":
        p = n + n % 2
        W = wg.EdgeWeights.from_vector(p, rng.uniform(size=p * (p - 1) // 2)).matrix
        cost, _ = wg.min_perfect_matching(W)
        best = min(sum(W[i, j] for i, j in m) for m in wg.perfect_matchings(p))
        return int(not _close(cost, best))
    if family == "Assignment":
        C = rng.exponential(size=(n, n))
        cost, pi = wg.hungarian(C)
        bcost, bpi = wg.assignment_brute_force(C)
        return int(not _close(cost, bcost) or tuple(pi) != tuple(bpi))
    if family in ("SK", "EA"):
        if family == "SK":
            pairs = spin.sk_bonds(n)
        else:
            side = max(int(math.isqrt(n)), 1)
            lat = spin.LatticeBox((side, max(n // side, 1)))
            pairs, n = lat.bonds, lat.size
        J = rng.standard_normal(len(pairs))
        fast = spin.ground_state(n, pairs, J)
        slow = spin.naive_ground_state(n, pairs, J)
        return int(not _close(fast.objective_value, slow.objective_value) or fast.encoding != slow.encoding)
    if family == "BRW":
        dt = brw_mod.sample_brw((0.0, 0.0, 1.0), make_law("gaussian"), n, rng)
        M, sol = brw_mod.min_displacement(dt)
        tree = dt.tree
        brute = min(sum(dt.disp[v] for v in tree.ancestors(int(leaf))) for leaf in tree.leaves)
        return int(not _close(M, brute))
    if family in ("Wigner", "Wishart"):
        A = rng.standard_normal((n, n))
        A = A + A.T if family == "Wigner" else A.T @ A
        w, V = rm.symmetric_eigen(A)
        ref = np.linalg.eigvalsh(A)
        res = np.linalg.norm(A @ V - V * w, axis=0).max()
        return int(not np.allclose(w, ref, atol=1e-8 * (1 + np.abs(ref).max())) or res > 1e-8 * np.linalg.norm(A))
    raise ValueError(family)


def _oracle(spec, n, shape, r, seed):
    fams = ORACLE_FAMILIES if spec.family == "all" else (spec.family,)
    out = []
    for k, fam in enumerate(fams):
        size = ORACLE_SIZES[fam] if spec.family == "all" else n
        out.append((f"mismatch:{fam}", oracle_mismatch(fam, size, substream(seed, k))))
    return out


PIPELINES = {"calibrate": _calibrate, "stability": _stability, "tightness": _tightness, "oracle-check": _oracle}


def run_replication(spec: ExperimentSpec, r: int) -> list[dict]:
    seed = hash64(spec.seed, r)
    rows = []
    sizes = spec.sizes() if spec.family != "all" else [(0, ())]
    for n, shape in sizes:
        t0 = time.perf_counter()
        try:
            cells = PIPELINES[spec.kind](spec, n, shape, r, seed)
            failed = None
        except StabilityLabError as e:
            cells, failed = [], f"{type(e).__name__}: {e}"
        ms = (time.perf_counter() - t0) * 1000.0 if spec.timings else None
        base = dict(kind=spec.kind, family=spec.family, n=n, d=spec.d, q=spec.q, variant=spec.variant,
                    replication=r, seed=seed, runtime_ms=ms)
        if failed:
            rows.append(dict(base, epsilon=None, theta=None, statistic_name="failed", value=math.nan,
                             error=failed))
        for cell in cells:
            name, val, eps, theta = (cell + (None, None))[:4]
            rows.append(dict(base, epsilon=eps, theta=theta, statistic_name=name, value=float(val)))
    return rows


def _run_chunk(args):
    spec, rs = args
    return [row for r in rs for row in run_replication(spec, r)]


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> ExperimentRecord:
    reps = list(range(spec.replications))
    if jobs <= 1 or len(reps) == 1:
        rows = _run_chunk((spec, reps))
    else:
        chunks = [(spec, reps[i::jobs]) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = [row for part in pool.map(_run_chunk, chunks) for row in part]
    # order within a replication is fixed by the pipeline; sort replications stably
    rows.sort(key=lambda row: row["replication"])
    record = ExperimentRecord(spec, rows)
    record.failures = [row for row in rows if row["statistic_name"] == "failed"]
    return record


# --- output ------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def to_csv(record: ExperimentRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in record.rows:
        w.writerow([_fmt(row.get(c)) for c in COLUMNS])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def to_json(record: ExperimentRecord) -> str:
    spec = record.spec
    doc = dict(spec=spec.as_dict(), columns=list(COLUMNS),
               rows=[{c: row.get(c) for c in COLUMNS} for row in record.rows],
               summary=record.summary(),
               failures=[dict(replication=row["replication"], n=row["n"], error=row["error"])
                         for row in record.failures])
    if spec.kind == "calibrate" and spec.family != "all":
        doc["anchor"] = {str(n): calibration_anchor(spec, n) for n, _ in spec.sizes()}
    if spec.kind == "tightness":
        doc["growth"] = record.growth()
    return json.dumps(_json_safe(doc), indent=1) + "\n"


def emit_results(record: ExperimentRecord, fmt: str = "csv", out_dir: str = "results") -> str:
    """Write the record to ``out_dir/<kind>_<family>.<fmt>`` and return the path."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{record.spec.kind}_{record.spec.family}.{fmt}")
    text = to_csv(record) if fmt == "csv" else to_json(record)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path
