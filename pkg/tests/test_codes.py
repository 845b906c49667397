"""Tanner codes, group-algebra lifted products, distances, free actions."""
from __future__ import annotations

import itertools

import numpy as np
import pytest

from abelift import gf2
from abelift.codes import (BudgetError, CSSCode, GroupAlgebraMatrix,
                           LinearCodeF2, circulant_structure_check,
                           code_dimension, css_valid, free_action_check,
                           group_algebra_from_blocks, lifted_product,
                           local_code_search, min_distance, pairs_action_free,
                           tanner_code, tanner_from_certificate,
                           tanner_lift_code, toric_code, write_alist)
from abelift.graphs import complete_graph, Signing
from abelift.groups import AbelianGroup
from abelift.search import derandomized_lift_search


HAMMING = np.array([[1, 0, 1, 0, 1, 0, 1],
                    [0, 1, 1, 0, 0, 1, 1],
                    [0, 0, 0, 1, 1, 1, 1]], dtype=np.uint8)


def _k4_z3_certificate():
    base = complete_graph(4)
    rows = np.array(list(itertools.product(range(3), repeat=6)),
                    dtype=np.int64)
    return derandomized_lift_search(base, AbelianGroup.cyclic(3),
                                    rows[:90]).certificate


def test_linear_code_basics():
    rep = LinearCodeF2.repetition(3)
    assert rep.dimension == 1
    assert rep.distance() == 3
    assert rep.contains([1, 1, 1]) and not rep.contains([1, 0, 1])
    ham = LinearCodeF2(HAMMING)
    assert ham.dimension == 4
    assert ham.distance() == 3
    assert ham.dual().distance() == 4  # simplex code
    gen = ham.generator_matrix()
    assert not gf2.matmul(ham.parity, gen.T).any()


def test_code_dimension_matches_rank():
    assert code_dimension(HAMMING) == 4
    assert code_dimension(np.zeros((2, 5), dtype=np.uint8)) == 5


def test_tanner_full_space_is_unconstrained():
    g = complete_graph(4)
    H = tanner_code(g, LinearCodeF2.full_space(3))
    assert H.shape == (0, 6)


def test_tanner_even_weight_on_k4_is_the_cycle_space():
    g = complete_graph(4)
    H = tanner_code(g, LinearCodeF2.even_weight(3))
    code = LinearCodeF2(H)
    assert code.length == 6
    assert code.dimension == 3  # |E| - |V| + 1
    # every triangle of K4 is a codeword
    for tri in itertools.combinations(range(4), 3):
        word = np.zeros(6, dtype=np.uint8)
        for u, v in itertools.combinations(tri, 2):
            word[g.edge_id(u, v)] = 1
        assert code.contains(word)


def test_tanner_rejects_length_mismatch():
    with pytest.raises(ValueError, match="length"):
        tanner_code(complete_graph(4), LinearCodeF2.repetition(4))


def test_local_code_search_repetition_regime():
    code, info = local_code_search(3, 3, 1, budget=2000, seed=0)
    assert info["found"] and info["tried"] == 5
    assert info["distance"] >= 3 and info["dual_distance"] >= 1
    assert code.distance() == info["distance"]


def test_local_code_search_two_sided_targets():
    code, info = local_code_search(7, 3, 3, budget=20000, seed=0)
    assert info["tried"] == 901
    assert info["distance"] == 3 and info["dual_distance"] == 4
    assert code.dual().distance() == 4


def test_local_code_search_impossible_targets():
    with pytest.raises(BudgetError, match="no length-3"):
        local_code_search(3, 4, 1, budget=300, seed=0)
    with pytest.raises(ValueError, match="caps length"):
        local_code_search(17, 3)


def test_group_algebra_matmul_and_star():
    a = GroupAlgebraMatrix.from_polys(4, [[[0, 1]]])
    sq = a.matmul(a)
    assert sq.entries[0][0] == frozenset({0, 2})  # (1+x)^2 = 1 + x^2 over F2
    assert a.star().entries[0][0] == frozenset({0, 3})  # conjugate negates x
    full = a.expand()
    assert np.array_equal(gf2.matmul(full, full),
                          sq.expand())


def test_group_algebra_expand_roundtrip():
    rng = np.random.default_rng(4)
    polys = [[frozenset(int(x) for x in rng.choice(5, size=2, replace=False))
              for _ in range(3)] for _ in range(2)]
    mat = GroupAlgebraMatrix.from_polys(5, polys)
    back = group_algebra_from_blocks(mat.expand(), 5)
    assert back.entries == mat.entries
    with pytest.raises(ValueError, match="not circulant"):
        bad = mat.expand().copy()
        bad[0, 0] ^= 1
        group_algebra_from_blocks(bad, 5)


def test_circulant_structure_check_cases():
    assert circulant_structure_check(np.eye(4, dtype=np.uint8), 2)
    single = np.zeros((2, 4), dtype=np.uint8)
    single[0, 0] = 1
    assert not circulant_structure_check(single, 2)


def test_css_valid_small_cases():
    assert css_valid([[1, 1]], [[1, 1]])
    assert not css_valid([[1, 0]], [[1, 0]])
    with pytest.raises(ValueError, match="CSS"):
        CSSCode(np.array([[1, 0]]), np.array([[1, 0]]))


def test_toric_family_parameters():
    for ell, dist in ((2, 2), (3, 3), (4, 4)):
        code = toric_code(ell)
        assert code.n == 2 * ell * ell
        assert code.k == 2
        rep = min_distance(code)
        assert rep.value == dist and rep.certified
        assert rep.dx == dist and rep.dz == dist


def test_lifted_product_degenerate_ring():
    one = GroupAlgebraMatrix.from_polys(1, [[[0, 0]]])
    code = toric_code(1)
    assert code.n == 2 and code.k == 0
    assert np.array_equal(code.hx, np.array([[1, 1]], dtype=np.uint8))
    assert np.array_equal(code.hz, np.array([[1, 1]], dtype=np.uint8))
    assert lifted_product(one, one).n == 2


def test_lifted_product_modulus_mismatch():
    a = GroupAlgebraMatrix.from_polys(2, [[[0, 1]]])
    b = GroupAlgebraMatrix.from_polys(3, [[[0, 1]]])
    with pytest.raises(ValueError, match="ell"):
        lifted_product(a, b)


def test_lifted_product_rectangular_factors_are_css():
    a = GroupAlgebraMatrix.from_polys(3, [[[0], [0, 1]], [[1], [0, 2]]])
    b = GroupAlgebraMatrix.from_polys(3, [[[0, 2], [1]]])
    code = lifted_product(a, b)
    assert css_valid(code.hx, code.hz)


def test_dimension_invariant_under_row_mixing():
    code = toric_code(3)
    rng = np.random.default_rng(6)
    hx = code.hx.copy()
    hz = code.hz.copy()
    for _ in range(20):
        i, j = rng.integers(hx.shape[0], size=2)
        if i != j:
            hx[i] ^= hx[j]
        i, j = rng.integers(hz.shape[0], size=2)
        if i != j:
            hz[i] ^= hz[j]
    mixed = CSSCode(hx, hz)
    assert mixed.k == code.k


def test_min_distance_classical_modes():
    ham = LinearCodeF2(HAMMING)
    exact = min_distance(ham)
    assert exact.value == 3 and exact.certified
    ub = min_distance(ham, mode="information-set", trials=50, seed=1)
    assert not ub.certified
    assert ub.value >= exact.value


def test_min_distance_css_upper_bound_never_beats_exact():
    code = toric_code(3)
    exact = min_distance(code)
    for seed in range(5):
        ub = min_distance(code, mode="information-set", trials=60, seed=seed)
        assert ub.value >= exact.value
        assert not ub.certified


def test_min_distance_guards():
    big = LinearCodeF2(np.zeros((1, 30), dtype=np.uint8))
    with pytest.raises(ValueError, match="too large"):
        big.distance()
    with pytest.raises(ValueError, match="logical"):
        min_distance(toric_code(1))
    with pytest.raises(ValueError, match="mode"):
        min_distance(LinearCodeF2.repetition(3), mode="glass-box")


def test_css_json_roundtrip():
    code = toric_code(2)
    payload = code.to_json(distance={"mode": "exact", "value": 2})
    back = CSSCode.from_json(payload)
    assert np.array_equal(back.hx, code.hx)
    assert np.array_equal(back.hz, code.hz)
    assert payload["n"] == 8 and payload["k"] == 2


def test_free_action_on_canonical_lift():
    base = complete_graph(4)
    sg = Signing.random(base, AbelianGroup.cyclic(3), seed=1)
    rep = free_action_check(base, sg)
    assert rep.vertices_free and rep.edges_free and rep.ok
    trivial = Signing.identity(base, AbelianGroup.cyclic(1))
    assert free_action_check(base, trivial).ok  # vacuous: no nontrivial g


def test_pairs_action_catches_self_pairing_fixed_edge():
    z2 = AbelianGroup.cyclic(2)
    # an unordered pair whose ends swap under the half shift
    pairs = [((0, 0), (0, 1))]
    free, witness = pairs_action_free(z2, pairs)
    assert not free
    g, pair = witness
    assert g == (1,) and pair == ((0, 0), (0, 1))
    # ordinary cross-fiber pairs stay free
    assert pairs_action_free(z2, [((0, 0), (1, 0)), ((0, 1), (1, 1))])[0]


def test_tanner_from_certificate_is_circulant():
    cert = _k4_z3_certificate()
    local = LinearCodeF2.even_weight(3)
    H = tanner_from_certificate(cert, local)
    assert H.shape == (12, 18)  # n * checks * ell rows, m * ell cols
    assert circulant_structure_check(H, 3)
    code = tanner_lift_code(cert, local)
    assert code.dimension == 18 - gf2.rank(H)
    # fiber rotation maps codewords to codewords
    n_blocks = H.shape[1] // 3
    perm = np.concatenate([np.arange(3)[np.r_[1:3, 0]] + 3 * b
                           for b in range(n_blocks)])
    rotated = H[:, perm]
    assert gf2.rank(np.vstack([H, rotated])) == gf2.rank(H)


def test_certificate_to_css_chain():
    cert = _k4_z3_certificate()
    H = tanner_from_certificate(cert, LinearCodeF2.even_weight(3))
    A = group_algebra_from_blocks(H, 3)
    B = GroupAlgebraMatrix.from_polys(3, [[[0, 1]]])
    code = lifted_product(A, B)
    assert css_valid(code.hx, code.hz)
    assert code.n == 90
    assert code.k == 8


def test_alist_export(tmp_path):
    path = tmp_path / "h.alist"
    write_alist(HAMMING, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "7 3"
    n_cols, n_rows = 7, 3
    col_degrees = [int(x) for x in lines[2].split()]
    row_degrees = [int(x) for x in lines[3].split()]
    assert len(col_degrees) == n_cols and len(row_degrees) == n_rows
    assert sum(col_degrees) == sum(row_degrees) == int(HAMMING.sum())
    # adjacency lists are 1-based and match the matrix
    first_col = [int(x) for x in lines[4].split() if x != "0"]
    assert first_col == [i + 1 for i in np.nonzero(HAMMING[:, 0])[0]]
