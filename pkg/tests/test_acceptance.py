"""Whole-system acceptance checks, one printed verdict line per criterion.

Each test covers one acceptance criterion end to end and registers a
single PASS/FAIL line that the terminal summary echoes after the run.
The wall-clock check is collected last (see conftest) so it sees the
whole session.
"""
from __future__ import annotations

import itertools
import math
import time

import numpy as np
import pytest

from abelift import serial
from abelift.codes import (GroupAlgebraMatrix, LinearCodeF2,
                           circulant_structure_check, code_dimension,
                           css_valid, lifted_product, min_distance,
                           tanner_code, tanner_from_certificate)
from abelift.graphs import (Signing, bicycle_free_radius, complete_graph,
                            cycle_graph, petersen_graph, random_regular)
from abelift.groups import AbelianGroup
from abelift.hikes import (EdgeSubgraph, count_bounds, decode_graph,
                           encode_graph, enumerate_hikes)
from abelift.pseudorandom import (bias_exact, biased_set_search,
                                  hoeffding_tail_check)
from abelift.search import (derandomized_lift_search, exponential_regime_build,
                            verify_certificate)
from abelift.spectral import ihara_check, lambda2, spectrum_union_check

TWO_SQRT2 = 2.0 * math.sqrt(2.0)


def _verdict(log: list[str], num: int, name: str, ok: bool, detail: str) -> bool:
    line = f"criterion {num:02d} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    log.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def union_instances():
    """50 random (base, group, signing) triples shared by criteria 1 and 2."""
    rng = np.random.default_rng(20260814)
    groups = [AbelianGroup.cyclic(2), AbelianGroup.cyclic(3),
              AbelianGroup.cyclic(4), AbelianGroup.cyclic(6),
              AbelianGroup.product([2, 2])]
    triples = []
    for i in range(50):
        n = int(rng.choice([4, 6, 8, 10, 12]))
        base = random_regular(n, 3, seed=int(rng.integers(2 ** 31)))
        group = groups[i % len(groups)]
        values = np.column_stack([rng.integers(f, size=base.m)
                                  for f in group.factors])
        triples.append(Signing(base, group, values))
    return triples


def test_criterion_01_spectrum_union(union_instances, acceptance_log):
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for sg in union_instances:
        rep = spectrum_union_check(sg, tol=1e-8, include_nonbacktracking=True)
        worst = max(worst, rep.adjacency_distance, rep.nb_distance)
        ok = ok and rep.passed
    dt = time.perf_counter() - t0
    ok = ok and worst <= 1e-8 and dt <= 60.0
    assert _verdict(acceptance_log, 1, "spectrum union", ok,
                    f"50 triples, max multiset distance {worst:.2e}, {dt:.1f}s")


def test_criterion_02_ihara_bound(union_instances, acceptance_log):
    worst_slack = math.inf
    for sg in union_instances:
        chis = [None] + [c for c in sg.group.characters() if any(c)]
        for chi in chis:
            rep = ihara_check(sg, chi)
            worst_slack = min(worst_slack, rep.bound - rep.lhs)
    ok = worst_slack >= -1e-8
    assert _verdict(acceptance_log, 2, "ihara bound", ok,
                    f"min slack {worst_slack:.3e} over trivial + signed forms")


def _connected_subgraphs(G, max_edges):
    out = []
    for size in range(1, max_edges + 1):
        for combo in itertools.combinations(G.edges, size):
            sub = EdgeSubgraph.from_edges(combo)
            labels, rows = sub.neighbor_rows()
            seen = {0}
            frontier = [0]
            while frontier:
                x = frontier.pop()
                for y in rows[x]:
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
            if len(seen) == len(labels):
                out.append(sub)
    return out


def test_criterion_03_dfs_roundtrip(acceptance_log):
    hosts = [complete_graph(4), cycle_graph(8), petersen_graph()]
    checked = failures = 0
    for g in hosts:
        for sub in _connected_subgraphs(g, 6):
            for start in sorted(sub.vertices):
                for mode in (1, 2):
                    enc = encode_graph(g, sub, start, mode=mode)
                    if decode_graph(g, enc) != sub:
                        failures += 1
                    checked += 1
    ok = failures == 0 and checked > 0
    assert _verdict(acceptance_log, 3, "dfs roundtrip", ok,
                    f"{checked} encode/decode pairs, {failures} failures")


def test_criterion_04_hike_counts_vs_bounds(acceptance_log):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    violations = checked = 0
    for _ in range(10):
        n = int(rng.choice(np.arange(16, 31, 2)))
        g = random_regular(n, 3, seed=int(rng.integers(2 ** 31)))
        bfr = bicycle_free_radius(g)
        r = g.n if math.isinf(bfr) else max(1, int(bfr))
        for k in (2, 3, 4, 5):
            count = enumerate_hikes(g, k - 1, singleton_free_only=True)
            if count > count_bounds(n, 3, k, r).bound1:
                violations += 1
            checked += 1
    dt = time.perf_counter() - t0
    ok = violations == 0 and dt <= 300.0
    assert _verdict(acceptance_log, 4, "hike count bounds", ok,
                    f"{checked} graph/k pairs, {violations} violations, {dt:.1f}s")


@pytest.fixture(scope="module")
def quality_base():
    for seed in range(64):
        g = random_regular(50, 3, seed=seed)
        if lambda2(g) <= TWO_SQRT2 + 0.1:
            return g
    pytest.fail("rejection sampling found no near-optimal 3-regular base")


def test_criterion_05_desk_scale_lift_quality(quality_base, acceptance_log):
    t0 = time.perf_counter()
    target = TWO_SQRT2 + 0.2
    rng = np.random.default_rng(5)
    best = {}
    for ell in (2, 4, 8, 16):
        support = rng.integers(ell, size=(200, quality_base.m))
        res = derandomized_lift_search(quality_base, AbelianGroup.cyclic(ell),
                                       support)
        best[ell] = res.lam
    wins = sum(lam <= target for lam in best.values())
    dt = time.perf_counter() - t0
    ok = wins >= 3 and dt <= 600.0
    digest = ", ".join(f"l={ell}: {lam:.4f}" for ell, lam in best.items())
    assert _verdict(acceptance_log, 5, "desk-scale lift quality", ok,
                    f"target {target:.4f} met {wins}/4 [{digest}], {dt:.1f}s")


@pytest.fixture(scope="module")
def walk_result16():
    base = random_regular(16, 3, seed=0)
    return exponential_regime_build(base, 16, 64, master_seed=0)


def test_criterion_06_walk_driver(walk_result16, acceptance_log):
    res = walk_result16
    replay = exponential_regime_build(random_regular(16, 3, seed=0), 16, 64,
                                      master_seed=0)
    identical = (serial.canonical_bytes(res.certificate)
                 == serial.canonical_bytes(replay.certificate))
    sound = verify_certificate(res.certificate)["ok"]
    ok = res.lam < 3.0 and identical and sound
    assert _verdict(acceptance_log, 6, "walk-regime driver", ok,
                    f"lambda {res.lam:.6f} < 3, replay identical: {identical}")


def test_criterion_07_bias_oracles(acceptance_log):
    full = np.array(list(itertools.product(range(5), repeat=4)))
    zero = bias_exact(full, 5)
    one = bias_exact([[0, 0, 0]], 2)
    pair = bias_exact([[0], [1]], 4)
    reverified = True
    for ellp, m, nu, budget in [(2, 3, 1.0, 4), (2, 2, 0.0, 8),
                                (5, 4, 0.6, 40)]:
        bs = biased_set_search(ellp, m, nu, size_budget=budget, seed=0)
        rep = bs.verify(seed=1)
        reverified = reverified and rep["value"] <= bs.claimed_bias + 1e-12
    ok = (zero == 0.0 and one == 1.0
          and abs(pair - math.sqrt(2.0) / 2.0) <= 1e-12 and reverified)
    assert _verdict(acceptance_log, 7, "bias oracles", ok,
                    f"full={zero}, singleton={one}, pair err "
                    f"{abs(pair - math.sqrt(2.0) / 2.0):.1e}, searches ok: {reverified}")


def test_criterion_08_hoeffding_tail(acceptance_log):
    g = cycle_graph(10)
    ok = True
    details = []
    for t in (4.0, 8.0):
        rep = hoeffding_tail_check(g, 16, range(g.m), t, trials=10 ** 4, seed=0)
        ok = ok and rep.passed
        details.append(f"t={t:g}: emp {max(rep.empirical_re, rep.empirical_im):.4f}"
                       f" <= bound {rep.bound:.4f}")
    assert _verdict(acceptance_log, 8, "hoeffding tail", ok, "; ".join(details))


def test_criterion_09_toric_family(acceptance_log):
    expected = {2: (8, 2, 2), 3: (18, 2, 3), 4: (32, 2, 4)}
    ok = True
    for ell, (n, k, dist) in expected.items():
        a = GroupAlgebraMatrix.from_polys(ell, [[{0, 1}]])
        css = lifted_product(a, a)
        rep = min_distance(css, mode="exact")
        ok = ok and (css.n, css.k, rep.value) == (n, k, dist)
        ok = ok and rep.certified and css_valid(css.hx, css.hz)
    rng = np.random.default_rng(9)
    for _ in range(3):
        ell = int(rng.integers(2, 6))
        a = GroupAlgebraMatrix.from_polys(
            ell, [[set(rng.choice(ell, size=2)) for _ in range(3)]
                  for _ in range(2)])
        b = GroupAlgebraMatrix.from_polys(
            ell, [[set(rng.choice(ell, size=2)) for _ in range(2)]])
        css = lifted_product(a, b)
        ok = ok and css_valid(css.hx, css.hz)
    assert _verdict(acceptance_log, 9, "toric family", ok,
                    "(8,2,2)/(18,2,3)/(32,2,4) exact, all products CSS-valid")


def test_criterion_10_quasi_cyclic_structure(walk_result16, acceptance_log):
    local = LinearCodeF2.even_weight(3)
    small = exponential_regime_build(complete_graph(4), 3, 2, master_seed=0)
    h_small = tanner_from_certificate(small.certificate, local)
    h_large = tanner_from_certificate(walk_result16.certificate, local)
    dim = code_dimension(tanner_code(complete_graph(4), local))
    ok = (circulant_structure_check(h_small, 3)
          and circulant_structure_check(h_large, 16)
          and h_small.shape == (12, 18) and dim == 3)
    assert _verdict(acceptance_log, 10, "quasi-cyclic structure", ok,
                    f"certificates at l=3 and l=16 circulant, K4 dim {dim}")


def test_criterion_11_wall_clock(session_start, acceptance_log):
    elapsed = time.perf_counter() - session_start
    ok = elapsed <= 900.0
    assert _verdict(acceptance_log, 11, "suite wall clock", ok,
                    f"{elapsed:.1f}s <= 900s")
