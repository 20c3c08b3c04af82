"""Acceptance criteria 1-14.

Each test prints one ``criterion N: PASS|FAIL`` line (collected and repeated in
the terminal summary). The master seed of criterion N is N.
"""

import itertools
import math
import time

import numpy as np
import pytest

from stabilitylab import euclidean as eu
from stabilitylab import markov
from stabilitylab import matrices as rm
from stabilitylab import spin
from stabilitylab import weighted as wg
from stabilitylab.config import parse_config
from stabilitylab.experiments import oracle_mismatch, run_experiment
from stabilitylab.laws import make_law
from stabilitylab.metric import SolutionCloud, covering_number_internal, packing_number_exact
from stabilitylab.seeding import substream
from stabilitylab.stats import chi_square_uniform, ks_one_sample, ks_two_sample, quantile, subgamma_max_check

RESULTS = []


def report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def timed_experiment(text):
    t0 = time.perf_counter()
    rec = run_experiment(parse_config(text))
    return rec, time.perf_counter() - t0


def test_criterion_01_parisi():
    rec, secs = timed_experiment("[calibrate]\nfamily = Assignment\nn = 10\nlaw = exponential\n"
                                 "replications = 5000\nseed = 1\n")
    v = rec.values("optimum")
    mean, se = v.mean(), v.std(ddof=1) / math.sqrt(v.size)
    target = wg.parisi_mean(10)
    ok = abs(mean - target) <= 3 * se and secs < 30
    report(1, ok, f"mean {mean:.5f} vs {target:.6f} (|z| = {abs(mean - target) / se:.2f}), {secs:.1f} s")


def test_criterion_02_wigner_edge():
    rec, secs = timed_experiment("[calibrate]\nfamily = Wigner\nn = 300\nlaw = gaussian\n"
                                 "replications = 20\nseed = 2\n")
    med = float(np.median(rec.values("lambda_min_scaled")))
    report(2, -2.24 <= med <= -1.76 and secs < 120, f"median lambda_1/sqrt(n) = {med:.4f}, {secs:.1f} s")


def test_criterion_03_marchenko_pastur_edge():
    rec, secs = timed_experiment("[calibrate]\nfamily = Wishart\nn = 200\nalpha = 1\nlaw = gaussian\n"
                                 "replications = 20\nseed = 3\n")
    med = float(np.median(rec.values("lambda_max_scaled")))
    report(3, 3.5 <= med <= 4.5 and secs < 120, f"median lambda_max/n = {med:.4f}, {secs:.1f} s")


def test_criterion_04_brw_velocity():
    rec, secs = timed_experiment("[calibrate]\nfamily = BRW\nn = 18\nprogeny = 0, 0, 1\nlaw = gaussian\n"
                                 "replications = 30\nseed = 4\n")
    med = float(np.median(rec.values("min_position_scaled")))
    report(4, -1.18 < med < -0.85 and secs < 120,
           f"median M_n/n = {med:.4f} (-psi* = {-math.sqrt(2 * math.log(2)):.4f}), {secs:.1f} s")


def test_criterion_05_sandwich():
    rng = substream(5)
    grid = (0.05, 0.1, 0.2, 0.35, 0.6)
    bad = 0
    for _ in range(1000):
        k = int(rng.integers(1, 21))
        pts = rng.uniform(size=(k, int(rng.integers(1, 4))))
        dist = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
        cloud = SolutionCloud(list(range(k)), dist)
        for delta in grid:
            p2 = packing_number_exact(cloud, 2 * delta)
            n = covering_number_internal(cloud, delta)
            p1 = packing_number_exact(cloud, delta)
            bad += not (p2 <= n <= p1)
    report(5, bad == 0, f"{bad} violations over 1000 clouds x {len(grid)} radii")


def test_criterion_06_oracles():
    rng = substream(6)
    miss = {}
    miss["held-karp"] = sum(oracle_mismatch("TSP", 3 + i % 7, rng) for i in range(200))
    miss["hungarian"] = sum(oracle_mismatch("Assignment", 1 + i % 7, rng) for i in range(500))
    miss["kruskal"] = sum(oracle_mismatch("MST", 2 + i % 6, rng) for i in range(100))
    miss["gray-sk"] = sum(oracle_mismatch("SK", 2 + i % 9, rng) for i in range(100))
    miss["gray-ea"] = sum(oracle_mismatch("EA", 2 + i % 9, rng) for i in range(100))
    miss["matching"] = sum(oracle_mismatch("WeightedGraph", 2 + 2 * (i % 5), rng) for i in range(100))
    total = sum(miss.values())
    report(6, total == 0, ", ".join(f"{k} {v}" for k, v in miss.items()) + " mismatches")


def test_criterion_07_sisters():
    rng = substream(7)
    bad = 0
    for _ in range(500):
        cfg = eu.sample_points(10, 2, rng)
        l = int(rng.integers(10))
        pert = cfg.replace(l, rng.uniform(size=2))
        g = eu.tsp_solve(pert)
        s = eu.tsp_sister_tour(cfg, pert, l, g)
        excess = eu.graph_weight(cfg.weights, s) - eu.graph_weight(pert.weights, g)
        bad += not (eu.is_hamiltonian_cycle(s, 10) and eu.graph_metric(s, g, 10) <= 6 / 10
                    and excess <= eu.tsp_sister_excess_bound(cfg, l) + 1e-12)
    for _ in range(500):
        cfg = eu.sample_points(12, 2, rng)
        l = int(rng.integers(12))
        pert = cfg.replace(l, rng.uniform(size=2))
        t = eu.mst_solve(pert)
        s = eu.mst_sister_tree(cfg, pert, l, t)
        excess = eu.graph_weight(cfg.weights, s) - eu.graph_weight(pert.weights, t)
        bad += not (eu.is_spanning_tree(s, 12) and eu.graph_metric(s, t, 12) <= 2 * eu.KISSING[2] / 12
                    and excess <= eu.mst_sister_excess_bound(cfg, pert, l, t) + 1e-12)
    report(7, bad == 0, f"{bad} violations over 500 tours + 500 trees")


def test_criterion_08_tsp_stability():
    rec, secs = timed_experiment("[stability]\nfamily = TSP\nn = 8, 10, 12\nd = 2\nq = 1\nepsilon = 0.5\n"
                                 "replications = 30\nseed = 8\n")
    qs = [quantile(rec.values("ball_count", n=n), 0.9) for n in (8, 10, 12)]
    ok = max(qs) <= 4 and all(b <= a + 1 for a, b in zip(qs, qs[1:]))
    report(8, ok, f"0.9-quantiles of ball_count at n = 8, 10, 12: {qs}")


TIGHTNESS = {
    "SK": "n = 12, 16, 20",
    "Assignment": "n = 5, 6, 7, 8",
    "TSP": "n = 7, 8, 9, 10",
    "EA": "shape = 2x4, 3x4, 4x4, 4x5",
}


def test_criterion_09_tightness():
    lines, ok = [], True
    for fam, grid in TIGHTNESS.items():
        rec, _ = timed_experiment(f"[tightness]\nfamily = {fam}\n{grid}\nepsilon = 0.25\nc = 1\n"
                                  "replications = 30\nseed = 9\n")
        g = rec.growth()[0]
        ok &= g["max_growth"] <= 2
        lines.append(f"{fam} q90 {g['quantiles']} growth {g['max_growth']:.2f}")
    report(9, ok, "; ".join(lines))


def test_criterion_10_assignment_uniformity():
    rng = substream(10)
    first = np.zeros(6, dtype=int)
    for _ in range(10_000):
        _, pi = wg.hungarian(rng.exponential(size=(6, 6)))
        first[pi[0]] += 1
    stat, p = chi_square_uniform(first)
    report(10, p > 0.01, f"chi-square {stat:.2f}, p = {p:.3f}, counts {first.tolist()}")


def test_criterion_11_edge_membership():
    em = wg.edge_membership_rate("tour", 8, 10_000, substream(11))
    near = np.abs(em.frequency - 2 / 7) <= 4 * em.se
    under = em.frequency <= em.bound + 4 * em.se
    report(11, bool(near.all() and under.all()),
           f"frequencies in [{em.frequency.min():.4f}, {em.frequency.max():.4f}], 2/7 = {2 / 7:.4f}, "
           f"bound {em.bound:.4f}")


def test_criterion_12_nearest_neighbour_scaling():
    rng = substream(12)
    scaled = []
    for n, reps in ((100, 40), (400, 20), (1600, 5)):
        vals = [np.mean(eu.nn_min_distances(eu.sample_points(n, 2, rng))) for _ in range(reps)]
        scaled.append(math.sqrt(n) * float(np.mean(vals)))
    spread = max(scaled) / min(scaled)
    report(12, spread < 1.5, f"sqrt(n) * mean min distance {[round(s, 4) for s in scaled]}, spread {spread:.3f}")


def test_criterion_13_metropolis_hastings():
    rng = substream(13)
    ps = {}
    for name in ("gaussian", "uniform"):
        f = markov.density(name)
        x = f.sample(rng, 10_000)
        y = markov.mh_step(x, 0.5, f, rng)
        ps[name] = min(ks_two_sample(x, y)[1], ks_one_sample(y, f.law.cdf)[1])
    s = np.array([0.01, 0.02, 0.04])
    spreads = {}
    for name in ("gaussian", "uniform"):
        r = markov.acceptance_defect_curve(markov.density(name), s, 0.0, 200_000, rng) / s
        spreads[name] = r.max() / r.min()
    ok = all(p > 0.001 for p in ps.values()) and all(v < 2 for v in spreads.values())
    report(13, ok, f"KS p-values {', '.join(f'{k} {v:.3f}' for k, v in ps.items())}; "
                   f"defect/s spread {', '.join(f'{k} {v:.3f}' for k, v in spreads.items())}")


def test_criterion_14_exact_inequalities():
    rng = substream(14)
    sk_bad = 0
    for i in range(200):
        n = 10 + i % 7
        g = spin.sk_ground_state(rng.standard_normal(n * (n - 1) // 2))
        sk_bad += not g.objective_value > spin.sk_ground_energy_bound(n)
    lin_bad = 0
    for i in range(200):
        n = 2 + i % 31
        lin_bad += not rm.interlacing_check(rm.sample_wigner(n, make_law("gaussian"), rng), (0.0, 0.1, 0.5)).passed
    samplers = [
        ("gaussian", lambda g, s: g.normal(size=s), 1.0, 0.0, 0.0),
        ("uniform(-1,1)", lambda g, s: g.uniform(-1, 1, size=s), 1.0, 0.0, 0.0),
        ("exp(1)", lambda g, s: g.exponential(size=s), 1.0, 1.0, 1.0),
        ("gamma(2,1)", lambda g, s: g.gamma(2.0, size=s), 2.0, 1.0, 2.0),
    ]
    sg_bad = 0
    for _name, sampler, s2, c, mean in samplers:
        for m in (2, 10, 100, 1000):
            sg_bad += not subgamma_max_check(sampler, s2, c, m, 2000, rng, mean=mean).passed
    ok = sk_bad == 0 and lin_bad == 0 and sg_bad == 0
    report(14, ok, f"SK bound violations {sk_bad}/200, interlacing/gap violations {lin_bad}/200, "
                   f"sub-Gamma violations {sg_bad}/16")
