"""Bias measurement, small-bias search, and expander-walk signings."""
from __future__ import annotations

import math

import numpy as np
import pytest

from abelift.graphs import RegularGraph, cycle_graph
from abelift.pseudorandom import (BiasedSet, bias_exact, bias_sampled,
                                  biased_set_search, effective_walk_degree,
                                  expander_walk_signing, hoeffding_tail_check)


def _full_product(ellp, m):
    grids = np.meshgrid(*[np.arange(ellp)] * m, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def test_bias_exact_full_product_vanishes():
    assert bias_exact(_full_product(3, 2), 3) == 0.0
    assert bias_exact(_full_product(2, 3), 2) == 0.0


def test_bias_exact_singletons_are_one():
    assert bias_exact(np.zeros((1, 2), dtype=np.int64), 4) == 1.0
    assert bias_exact(np.array([[3, 1]]), 4) == 1.0


def test_bias_exact_half_pair_over_z4():
    v = bias_exact(np.array([[0], [1]]), 4)
    assert v == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-12)


def test_bias_sampled_matches_trivial_cases():
    assert bias_sampled(_full_product(2, 3), 2, trials=500, seed=1) <= 1e-12
    assert bias_sampled(np.zeros((1, 3), dtype=np.int64), 2,
                        trials=100, seed=0) == pytest.approx(1.0)


def test_bias_sampled_never_exceeds_exact():
    rng = np.random.default_rng(7)
    for seed in range(5):
        sup = rng.integers(0, 4, size=(12, 3))
        exact = bias_exact(sup, 4)
        low = bias_sampled(sup, 4, trials=300, seed=seed)
        assert low <= exact + 1e-12


def test_bias_translation_invariance():
    rng = np.random.default_rng(5)
    sup = rng.integers(0, 5, size=(9, 3))
    s = BiasedSet(5, 3, sup, claimed_bias=1.0, verified={})
    before = bias_exact(s.support, 5)
    shifted = s.translate([2, 4, 1])
    after = bias_exact(shifted.support, 5)
    assert after == pytest.approx(before, abs=1e-12)


def test_biased_set_validation_and_json():
    with pytest.raises(ValueError, match="empty"):
        BiasedSet(3, 2, np.zeros((0, 2), dtype=np.int64), 1.0, {})
    with pytest.raises(ValueError, match="must be"):
        BiasedSet(3, 2, np.zeros((4, 3), dtype=np.int64), 1.0, {})
    s = BiasedSet(3, 2, np.array([[0, 1], [2, 2]]), 0.9, {"mode": "exact"})
    back = BiasedSet.from_json(s.to_json())
    assert back.ellp == 3 and back.m == 2
    assert np.array_equal(back.support, s.support)


def test_verify_switches_mode_on_character_cap():
    small = BiasedSet(2, 4, np.array([[0, 0, 0, 0]]), 1.0, {})
    assert small.verify()["mode"] == "exact"
    rng = np.random.default_rng(0)
    big = BiasedSet(2, 21, rng.integers(0, 2, size=(32, 21)), 1.0, {})
    rep = big.verify(trials=64, seed=3)
    assert rep["mode"] == "sampled" and rep["seed"] == 3


def test_search_trivial_nu_returns_identity_singleton():
    s = biased_set_search(4, 3, nu=1.0, size_budget=10, seed=0)
    assert s.size == 1
    assert np.array_equal(s.support, np.zeros((1, 3), dtype=np.int64))
    assert s.verified["value"] == 1.0


def test_search_zero_bias_needs_the_full_product():
    s = biased_set_search(2, 2, nu=0.0, size_budget=4, seed=0)
    assert s.size == 4
    assert s.verified == {"mode": "exact", "value": 0.0}


def test_search_is_reproducible():
    a = biased_set_search(5, 4, nu=0.6, size_budget=40, seed=11)
    b = biased_set_search(5, 4, nu=0.6, size_budget=40, seed=11)
    assert np.array_equal(a.support, b.support)
    assert a.verified == b.verified
    assert a.verified["value"] <= 0.6
    assert a.verify()["value"] == a.verified["value"]


def test_search_budget_exhaustion():
    # no two-point subset of Z2 x Z2 is exactly unbiased
    with pytest.raises(RuntimeError, match="trials"):
        biased_set_search(2, 2, nu=0.0, size_budget=2, trial_budget=6, seed=0)


def test_effective_walk_degree():
    assert effective_walk_degree(8, 36) == 6
    assert effective_walk_degree(64, 36) == 36
    assert effective_walk_degree(9, 36) == 8
    with pytest.raises(ValueError, match="fiber"):
        effective_walk_degree(2, 36)
    with pytest.raises(ValueError, match="even"):
        effective_walk_degree(8, 7)


def test_walk_signing_reproducible_and_certified():
    base = cycle_graph(10)
    a = expander_walk_signing(base, 64, seed=123)
    b = expander_walk_signing(base, 64, seed=123)
    assert a.walk == b.walk
    assert np.array_equal(a.signing.values, b.signing.values)
    assert a.aux_lambda <= a.aux_bound
    assert a.dprime_used == 36
    assert len(a.walk) == base.m
    assert a.signing.group.fiber_size == 64
    # consecutive walk values are adjacent in the auxiliary expander
    for x, y in zip(a.walk, a.walk[1:]):
        assert a.aux.has_edge(x, y)
    cert = a.certificate()
    assert cert["aux_hash"] == a.aux.content_hash()
    assert cert["kind"] == "expander-walk"


def test_walk_on_single_edge_base_is_just_the_start():
    base = RegularGraph([[1], [0]])
    ws = expander_walk_signing(base, 8, seed=5)
    assert ws.walk == (ws.start,)
    assert ws.signing.values.shape == (1, 1)


def test_walk_marginals_are_nearly_uniform():
    base = cycle_graph(10)
    ws = expander_walk_signing(base, 16, seed=0)
    rng = np.random.default_rng(99)
    trials = 10000
    cur = rng.integers(16, size=trials)
    cols = [cur.copy()]
    for _ in range(base.m - 1):
        cur = ws.aux.adj[cur, rng.integers(ws.dprime_used, size=trials)]
        cols.append(cur.copy())
    values = np.stack(cols, axis=1)
    phases = np.exp(2j * np.pi * values / 16)
    worst = np.abs(phases.mean(axis=0)).max()
    assert worst <= 0.05


def test_hoeffding_vacuous_threshold():
    rep = hoeffding_tail_check(cycle_graph(10), 16, range(10), 0.0,
                               trials=200, seed=0)
    assert rep.bound == 2.0 and rep.passed


def test_hoeffding_empty_subset():
    rep = hoeffding_tail_check(cycle_graph(10), 16, [], 3.0,
                               trials=50, seed=0)
    assert rep.empirical_re == 0.0 and rep.passed


def test_hoeffding_tail_on_c10():
    rep = hoeffding_tail_check(cycle_graph(10), 16, range(10), 8.0,
                               trials=2000, seed=1)
    assert rep.passed
    assert rep.bound == pytest.approx(2.0 * math.exp(-64.0 / (1280.0 * math.e)))


def test_hoeffding_rejects_bad_edges():
    with pytest.raises(ValueError, match="edge id"):
        hoeffding_tail_check(cycle_graph(10), 16, [40], 1.0, trials=10)
